//! Zig-zags: pairs of arithmetic progressions of ratio 2 joined by diagonal
//! arrows, their multiplicities, the oriented graph of a distinguished
//! zig-zag, trapezoids, refined selections and the telescoping identity.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::cartan::CartanMatrix;
use crate::error::{AlgebraError, Result};
use crate::multipoly::{MLaurent, VarId};
use crate::scalars::QRat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Row {
    Top,
    Bottom,
}

/// A vertex `x_c` (top row) or `y_c` (bottom row).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    pub row: Row,
    pub index: i32,
}

impl Vertex {
    pub fn top(index: i32) -> Vertex {
        Vertex { row: Row::Top, index }
    }

    pub fn bottom(index: i32) -> Vertex {
        Vertex { row: Row::Bottom, index }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = if self.row == Row::Top { "x" } else { "y" };
        write!(f, "{name}_{}", self.index)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    Horizontal,
    SouthWest,
    NorthWest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub src: Vertex,
    pub tgt: Vertex,
    pub kind: EdgeKind,
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.src, self.tgt)
    }
}

/// Arbitrary zig-zag: top row `s, s+2, …, t` of color `i`, bottom row `s', …, t'` of color `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GeneralZigZag {
    pub i: usize,
    pub j: usize,
    pub s: i32,
    pub t: i32,
    pub sp: i32,
    pub tp: i32,
}

impl GeneralZigZag {
    pub fn new(i: usize, j: usize, s: i32, t: i32, sp: i32, tp: i32) -> Result<GeneralZigZag> {
        if s > t || sp > tp || (t - s) % 2 != 0 || (tp - sp) % 2 != 0 {
            return Err(AlgebraError::InvalidArgument(format!(
                "rows {s}..{t} and {sp}..{tp} are not progressions of ratio 2"
            )));
        }
        Ok(GeneralZigZag { i, j, s, t, sp, tp })
    }

    /// Rows given by their left ends and lengths.
    pub fn from_rows(i: usize, j: usize, s: i32, len_top: u32, sp: i32, len_bottom: u32) -> GeneralZigZag {
        GeneralZigZag {
            i,
            j,
            s,
            t: s + 2 * (len_top as i32 - 1),
            sp,
            tp: sp + 2 * (len_bottom as i32 - 1),
        }
    }

    pub fn top(&self) -> impl Iterator<Item = i32> {
        (self.s..=self.t).step_by(2)
    }

    pub fn bottom(&self) -> impl Iterator<Item = i32> {
        (self.sp..=self.tp).step_by(2)
    }

    pub fn len_top(&self) -> u32 {
        ((self.t - self.s) / 2 + 1) as u32
    }

    pub fn len_bottom(&self) -> u32 {
        ((self.tp - self.sp) / 2 + 1) as u32
    }

    fn count_pairs(&self, offset: i32) -> u32 {
        let bottom: BTreeSet<i32> = self.bottom().collect();
        self.top().filter(|a| bottom.contains(&(a - offset))).count() as u32
    }

    /// Minimum of the northwest and southwest diagonal counts.
    pub fn m_z(&self, c: &CartanMatrix) -> u32 {
        let d = c.dij(self.i, self.j);
        self.count_pairs(d).min(self.count_pairs(-d))
    }

    /// `m_Z` plus the number of triples `(a, b, c)` with `a = b + 2c + d`, `1 ≤ c < −d`.
    pub fn big_m_z(&self, c: &CartanMatrix) -> u32 {
        let d = c.dij(self.i, self.j);
        let extra: u32 = (1..-d).map(|cc| self.count_pairs(2 * cc + d)).sum();
        self.m_z(c) + extra
    }

    /// The wheel specialization `z_{i,a} ↦ x q^{s+2(a−1)}`, `z_{j,b} ↦ y q^{s'+2(b−1)}`.
    pub fn specialization(&self) -> Vec<(VarId, VarId, i32)> {
        let mut out: Vec<(VarId, VarId, i32)> = self
            .top()
            .enumerate()
            .map(|(a, c)| (VarId::new(self.i as u32, a as u32 + 1), VarId::X, c))
            .collect();
        out.extend(
            self.bottom()
                .enumerate()
                .map(|(b, c)| (VarId::new(self.j as u32, b as u32 + 1), VarId::Y, c)),
        );
        out
    }
}

/// Distinguished zig-zag: a minimal one for `k + l = −d_ij` repeated `m` times, left end `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DistZigZag {
    pub i: usize,
    pub j: usize,
    pub d: i32,
    pub k: u32,
    pub l: u32,
    pub m: u32,
    pub s: i32,
}

/// A class of edge chosen from one trapezoid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    SouthWest,
    NorthWest,
    /// The `u`-th top horizontal edge counted from the right, `1 ≤ u ≤ k`.
    Top(u32),
    /// The `v`-th bottom horizontal edge counted from the right, `1 ≤ v ≤ l`.
    Bottom(u32),
}

impl Tag {
    /// Whether the tag behaves like a southwest arrow for the transition rule.
    fn forces_southwest_side(&self) -> bool {
        matches!(self, Tag::SouthWest | Tag::Top(_))
    }

    /// Tags counted by the sign.
    fn counts_for_sign(&self) -> bool {
        matches!(self, Tag::NorthWest | Tag::Top(_))
    }

    fn allowed_after(&self, prev: &Tag) -> bool {
        if prev.forces_southwest_side() {
            matches!(self, Tag::SouthWest | Tag::Bottom(_))
        } else {
            matches!(self, Tag::NorthWest | Tag::Top(_))
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::SouthWest => write!(f, "SW"),
            Tag::NorthWest => write!(f, "NW"),
            Tag::Top(u) => write!(f, "TOP({u})"),
            Tag::Bottom(v) => write!(f, "BOT({v})"),
        }
    }
}

/// One edge class per trapezoid `α = 0, …, m−1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RefinedSelection {
    pub tags: Vec<Tag>,
}

impl RefinedSelection {
    /// `σ`: how many trapezoids `α ≥ 1` chose a northwest or top edge.
    pub fn sigma(&self) -> u32 {
        self.tags.iter().skip(1).filter(|t| t.counts_for_sign()).count() as u32
    }

    /// `(−1)^σ`.
    pub fn sign(&self) -> i32 {
        if self.sigma().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// The chosen edges with multiplicities.
    pub fn multiplicities(&self, z: &DistZigZag) -> BTreeMap<Edge, u32> {
        let mut mu = BTreeMap::new();
        for (alpha, tag) in self.tags.iter().enumerate() {
            *mu.entry(z.edge_for(*tag, alpha as u32)).or_insert(0) += 1;
        }
        mu
    }

    /// Edges of the graph not chosen by the selection.
    pub fn complement(&self, z: &DistZigZag) -> Vec<Edge> {
        let mu = self.multiplicities(z);
        z.graph().edges.into_iter().filter(|e| !mu.contains_key(e)).collect()
    }
}

impl fmt::Display for RefinedSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.tags.iter().map(|t| t.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Coarse trapezoid choices, where the horizontal ones take a whole group of edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoarseTag {
    SouthWest,
    NorthWest,
    Up,
    Down,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZigZagGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

impl DistZigZag {
    pub fn new(c: &CartanMatrix, i: usize, j: usize, k: u32, l: u32, m: u32, s: i32) -> Result<DistZigZag> {
        if i == j || i >= c.rank() || j >= c.rank() {
            return Err(AlgebraError::InvalidArgument(format!(
                "zig-zag needs two distinct vertices, got {i}, {j}"
            )));
        }
        let d = c.dij(i, j);
        if (k + l) as i32 != -d {
            return Err(AlgebraError::InvalidArgument(format!("k + l = {} but −d_ij = {}", k + l, -d)));
        }
        if m == 0 {
            return Err(AlgebraError::InvalidArgument("multiplicity must be positive".into()));
        }
        Ok(DistZigZag { i, j, d, k, l, m, s })
    }

    pub fn t(&self) -> i32 {
        self.s + 2 * (self.k + self.m - 1) as i32
    }

    pub fn sp(&self) -> i32 {
        self.s + self.k as i32 - self.l as i32
    }

    pub fn tp(&self) -> i32 {
        self.sp() + 2 * (self.l + self.m - 1) as i32
    }

    pub fn general(&self) -> GeneralZigZag {
        GeneralZigZag {
            i: self.i,
            j: self.j,
            s: self.s,
            t: self.t(),
            sp: self.sp(),
            tp: self.tp(),
        }
    }

    pub fn len_top(&self) -> u32 {
        self.k + self.m
    }

    pub fn len_bottom(&self) -> u32 {
        self.l + self.m
    }

    /// Top vertices then bottom vertices, each left to right.
    pub fn vertices(&self) -> Vec<Vertex> {
        let g = self.general();
        g.top().map(Vertex::top).chain(g.bottom().map(Vertex::bottom)).collect()
    }

    /// The shuffle variable carried by a vertex.
    pub fn var_of(&self, v: Vertex) -> VarId {
        match v.row {
            Row::Top => VarId::new(self.i as u32, ((v.index - self.s) / 2 + 1) as u32),
            Row::Bottom => VarId::new(self.j as u32, ((v.index - self.sp()) / 2 + 1) as u32),
        }
    }

    pub fn color_of(&self, v: Vertex) -> usize {
        match v.row {
            Row::Top => self.i,
            Row::Bottom => self.j,
        }
    }

    pub fn graph(&self) -> ZigZagGraph {
        let vertices = self.vertices();
        let set: BTreeSet<Vertex> = vertices.iter().copied().collect();
        let mut edges = Vec::new();
        for &v in &vertices {
            let right = Vertex {
                row: v.row,
                index: v.index + 2,
            };
            if set.contains(&right) {
                edges.push(Edge {
                    src: v,
                    tgt: right,
                    kind: EdgeKind::Horizontal,
                });
            }
            let (other, kind) = match v.row {
                Row::Top => (Vertex::bottom(v.index + self.d), EdgeKind::SouthWest),
                Row::Bottom => (Vertex::top(v.index + self.d), EdgeKind::NorthWest),
            };
            if set.contains(&other) {
                edges.push(Edge { src: v, tgt: other, kind });
            }
        }
        edges.sort();
        ZigZagGraph { vertices, edges }
    }

    /// The edge of trapezoid `alpha` named by `tag`.
    pub fn edge_for(&self, tag: Tag, alpha: u32) -> Edge {
        let (t, tp) = (self.t() - 2 * alpha as i32, self.tp() - 2 * alpha as i32);
        let (k, l) = (self.k as i32, self.l as i32);
        match tag {
            Tag::SouthWest => Edge {
                src: Vertex::top(t),
                tgt: Vertex::bottom(tp - 2 * l),
                kind: EdgeKind::SouthWest,
            },
            Tag::NorthWest => Edge {
                src: Vertex::bottom(tp),
                tgt: Vertex::top(t - 2 * k),
                kind: EdgeKind::NorthWest,
            },
            Tag::Top(u) => Edge {
                src: Vertex::top(t - 2 * u as i32),
                tgt: Vertex::top(t - 2 * (u as i32 - 1)),
                kind: EdgeKind::Horizontal,
            },
            Tag::Bottom(v) => Edge {
                src: Vertex::bottom(tp - 2 * v as i32),
                tgt: Vertex::bottom(tp - 2 * (v as i32 - 1)),
                kind: EdgeKind::Horizontal,
            },
        }
    }

    fn tag_classes(&self) -> Vec<Tag> {
        let mut classes = vec![Tag::SouthWest, Tag::NorthWest];
        classes.extend((1..=self.k).map(Tag::Top));
        classes.extend((1..=self.l).map(Tag::Bottom));
        classes
    }

    /// All tag sequences obeying the transition rule.
    pub fn refined_selections(&self) -> Vec<RefinedSelection> {
        let classes = self.tag_classes();
        let mut partial: Vec<Vec<Tag>> = classes.iter().map(|t| vec![*t]).collect();
        for _ in 1..self.m {
            partial = partial
                .into_iter()
                .flat_map(|seq| {
                    let last = *seq.last().unwrap();
                    classes.iter().filter(move |t| t.allowed_after(&last)).map(move |t| {
                        let mut next = seq.clone();
                        next.push(*t);
                        next
                    })
                })
                .collect();
        }
        partial.into_iter().map(|tags| RefinedSelection { tags }).collect()
    }

    /// Coarse selections with their signs.
    pub fn coarse_selections(&self) -> Vec<(Vec<CoarseTag>, i32)> {
        let mut classes = vec![CoarseTag::SouthWest, CoarseTag::NorthWest];
        if self.k > 0 {
            classes.push(CoarseTag::Up);
        }
        if self.l > 0 {
            classes.push(CoarseTag::Down);
        }
        let sw_side = |t: &CoarseTag| matches!(t, CoarseTag::SouthWest | CoarseTag::Up);
        let mut partial: Vec<Vec<CoarseTag>> = classes.iter().map(|t| vec![*t]).collect();
        for _ in 1..self.m {
            let mut next = Vec::new();
            for seq in partial {
                let last = *seq.last().unwrap();
                for t in &classes {
                    let ok = if sw_side(&last) {
                        matches!(t, CoarseTag::SouthWest | CoarseTag::Down)
                    } else {
                        matches!(t, CoarseTag::NorthWest | CoarseTag::Up)
                    };
                    if ok {
                        let mut s = seq.clone();
                        s.push(*t);
                        next.push(s);
                    }
                }
            }
            partial = next;
        }
        partial
            .into_iter()
            .map(|seq| {
                let sigma = seq
                    .iter()
                    .skip(1)
                    .filter(|t| matches!(t, CoarseTag::NorthWest | CoarseTag::Up))
                    .count();
                (seq, if sigma % 2 == 0 { 1 } else { -1 })
            })
            .collect()
    }

    fn bar(&self, v: Vertex) -> MLaurent {
        MLaurent::var(self.var_of(v))
    }

    fn delta_edge(&self, e: &Edge) -> MLaurent {
        &self.bar(e.src) - &self.bar(e.tgt)
    }

    fn delta_coarse(&self, tag: CoarseTag, alpha: u32) -> MLaurent {
        let (t, tp) = (self.t() - 2 * alpha as i32, self.tp() - 2 * alpha as i32);
        let (k, l) = (self.k as i32, self.l as i32);
        let (a, b) = match tag {
            CoarseTag::SouthWest => (Vertex::top(t), Vertex::bottom(tp - 2 * l)),
            CoarseTag::Down => (Vertex::bottom(tp - 2 * l), Vertex::bottom(tp)),
            CoarseTag::NorthWest => (Vertex::bottom(tp), Vertex::top(t - 2 * k)),
            CoarseTag::Up => (Vertex::top(t - 2 * k), Vertex::top(t)),
        };
        &self.bar(a) - &self.bar(b)
    }

    /// `Σ_S (−1)^σ ∏_α δ(ε_α)` over refined (or coarse) selections, barred variables
    /// treated as independent indeterminates.
    pub fn selection_sum(&self, refined: bool) -> MLaurent {
        let mut total = MLaurent::zero();
        if refined {
            for sel in self.refined_selections() {
                let mut prod = MLaurent::constant(QRat::from_int(sel.sign() as i64));
                for (alpha, tag) in sel.tags.iter().enumerate() {
                    prod = &prod * &self.delta_edge(&self.edge_for(*tag, alpha as u32));
                }
                total = &total + &prod;
            }
        } else {
            for (seq, sign) in self.coarse_selections() {
                let mut prod = MLaurent::constant(QRat::from_int(sign as i64));
                for (alpha, tag) in seq.iter().enumerate() {
                    prod = &prod * &self.delta_coarse(*tag, alpha as u32);
                }
                total = &total + &prod;
            }
        }
        total
    }

    /// Checks that the signed selection sum vanishes; the error carries the offending polynomial.
    pub fn verify_selection_identity(&self, refined: bool) -> std::result::Result<(), MLaurent> {
        let sum = self.selection_sum(refined);
        if sum.is_zero() {
            Ok(())
        } else {
            Err(sum)
        }
    }
}

impl fmt::Display for DistZigZag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Z(i={}, j={}, k={}, l={}, m={}, s={})",
            self.i, self.j, self.k, self.l, self.m, self.s
        )
    }
}

/// All distinguished zig-zags with `s = 0` fitting into `n_i` top and `n_j` bottom variables.
pub fn enumerate_distinguished(c: &CartanMatrix, i: usize, j: usize, n_i: usize, n_j: usize) -> Vec<DistZigZag> {
    let e = -c.dij(i, j) as u32;
    let mut out = Vec::new();
    for k in 0..=e {
        let l = e - k;
        let mut m = 1;
        while (k + m) as usize <= n_i && (l + m) as usize <= n_j {
            out.push(DistZigZag {
                i,
                j,
                d: -(e as i32),
                k,
                l,
                m,
                s: 0,
            });
            m += 1;
        }
    }
    out
}

/// General zig-zags with `s = 0` fitting into `n_i × n_j` whose diagonal counts can matter.
pub fn enumerate_general(c: &CartanMatrix, i: usize, j: usize, n_i: usize, n_j: usize) -> Vec<GeneralZigZag> {
    let d = c.dij(i, j);
    let e = -d;
    let mut out = Vec::new();
    for li in 1..=n_i as u32 {
        for lj in 1..=n_j as u32 {
            let lo = -2 * (lj as i32 - 1) - e;
            let hi = 2 * (li as i32 - 1) + e;
            for sp in lo..=hi {
                if (sp - d).rem_euclid(2) != 0 {
                    continue;
                }
                let z = GeneralZigZag::from_rows(i, j, 0, li, sp, lj);
                if z.big_m_z(c) > 0 {
                    out.push(z);
                }
            }
        }
    }
    out
}

/// Orders vertices so that every edge runs from an earlier (larger) vertex to a later one.
/// Ties are broken by the vertex order, which makes the result deterministic.
pub fn topological_order(vertices: &[Vertex], edges: &[Edge]) -> Result<Vec<Vertex>> {
    let mut indeg: HashMap<Vertex, usize> = vertices.iter().map(|&v| (v, 0)).collect();
    let mut out_edges: HashMap<Vertex, Vec<Vertex>> = HashMap::new();
    for e in edges {
        *indeg.get_mut(&e.tgt).unwrap() += 1;
        out_edges.entry(e.src).or_default().push(e.tgt);
    }
    let mut ready: BTreeSet<Vertex> = indeg.iter().filter(|(_, &d)| d == 0).map(|(&v, _)| v).collect();
    let mut order = Vec::with_capacity(vertices.len());
    while let Some(v) = ready.pop_first() {
        order.push(v);
        for w in out_edges.get(&v).into_iter().flatten() {
            let d = indeg.get_mut(w).unwrap();
            *d -= 1;
            if *d == 0 {
                ready.insert(*w);
            }
        }
    }
    if order.len() == vertices.len() {
        Ok(order)
    } else {
        Err(AlgebraError::Cyclic)
    }
}

/// A second valid order obtained by swapping the first adjacent pair not joined by an edge.
pub fn alternative_order(order: &[Vertex], edges: &[Edge]) -> Option<Vec<Vertex>> {
    let linked: BTreeSet<(Vertex, Vertex)> = edges.iter().map(|e| (e.src, e.tgt)).collect();
    (0..order.len().saturating_sub(1)).find_map(|p| {
        let (a, b) = (order[p], order[p + 1]);
        if linked.contains(&(a, b)) || linked.contains(&(b, a)) {
            return None;
        }
        let mut alt = order.to_vec();
        alt.swap(p, p + 1);
        Some(alt)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank2(d: i64) -> CartanMatrix {
        CartanMatrix::rank_two(d)
    }

    #[test]
    fn diagonal_counts() {
        let c = rank2(-3);
        for (k, l, m) in [(0, 3, 1), (1, 2, 2), (3, 0, 3), (2, 1, 4)] {
            let z = DistZigZag::new(&c, 0, 1, k, l, m, 0).unwrap();
            assert_eq!(z.general().m_z(&c), m);
        }
        let lonely = GeneralZigZag::from_rows(0, 1, 0, 1, 7, 1);
        assert_eq!(lonely.m_z(&c), 0);
    }

    #[test]
    fn big_multiplicity() {
        let c = rank2(-2);
        let z = DistZigZag::new(&c, 0, 1, 2, 0, 1, 0).unwrap();
        assert_eq!(z.general().top().collect::<Vec<_>>(), vec![0, 2, 4]);
        assert_eq!(z.general().bottom().collect::<Vec<_>>(), vec![2]);
        assert_eq!(z.general().big_m_z(&c), 2);
        let c1 = rank2(-1);
        let z1 = DistZigZag::new(&c1, 0, 1, 1, 0, 1, 0).unwrap();
        assert_eq!(z1.general().big_m_z(&c1), 1);
        let c0 = rank2(0);
        let z0 = DistZigZag::new(&c0, 0, 1, 0, 0, 2, 0).unwrap();
        assert_eq!(z0.general().big_m_z(&c0), z0.general().m_z(&c0));
    }

    #[test]
    fn large_gap_example() {
        // d = −7 with rows arranged so that exactly three northwest arrows exist.
        let c = rank2(-7);
        let z = GeneralZigZag::from_rows(0, 1, 0, 10, 7, 4);
        assert_eq!(z.count_pairs(-7), 4);
        assert_eq!(z.count_pairs(7), 3);
        assert_eq!(z.m_z(&c), 3);
    }

    #[test]
    fn enumeration_examples() {
        let c = rank2(-1);
        let found = enumerate_distinguished(&c, 0, 1, 2, 1);
        assert_eq!(found.len(), 1);
        assert_eq!((found[0].k, found[0].l, found[0].m), (1, 0, 1));
        assert!(enumerate_distinguished(&c, 0, 1, 1, 1).is_empty());
        let c0 = rank2(0);
        let found = enumerate_distinguished(&c0, 0, 1, 1, 1);
        assert_eq!(found.iter().map(|z| (z.k, z.l, z.m)).collect::<Vec<_>>(), vec![(0, 0, 1)]);
    }

    #[test]
    fn small_graphs() {
        let c0 = rank2(0);
        let g = DistZigZag::new(&c0, 0, 1, 0, 0, 1, 0).unwrap().graph();
        assert_eq!(g.vertices, vec![Vertex::top(0), Vertex::bottom(0)]);
        assert_eq!(g.edges.len(), 2);
        let c = rank2(-1);
        let z = DistZigZag::new(&c, 0, 1, 1, 0, 1, 0).unwrap();
        let g = z.graph();
        assert_eq!(g.vertices, vec![Vertex::top(0), Vertex::top(2), Vertex::bottom(1)]);
        let pairs: BTreeSet<(Vertex, Vertex)> = g.edges.iter().map(|e| (e.src, e.tgt)).collect();
        let want: BTreeSet<(Vertex, Vertex)> = [
            (Vertex::top(0), Vertex::top(2)),
            (Vertex::top(2), Vertex::bottom(1)),
            (Vertex::bottom(1), Vertex::top(0)),
        ]
        .into();
        assert_eq!(pairs, want);
    }

    #[test]
    fn edge_counts() {
        for d in 0..=4 {
            let c = rank2(-d);
            for k in 0..=d as u32 {
                for m in 1..=3 {
                    let z = DistZigZag::new(&c, 0, 1, k, d as u32 - k, m, 0).unwrap();
                    let g = z.graph();
                    let count = |kind| g.edges.iter().filter(|e| e.kind == kind).count() as u32;
                    assert_eq!(count(EdgeKind::SouthWest), m);
                    assert_eq!(count(EdgeKind::NorthWest), m);
                    assert_eq!(count(EdgeKind::Horizontal), (z.k + m - 1) + (z.l + m - 1));
                    for sel in z.refined_selections() {
                        for (alpha, tag) in sel.tags.iter().enumerate() {
                            assert!(g.edges.contains(&z.edge_for(*tag, alpha as u32)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn selection_lists() {
        let c0 = rank2(0);
        let z = DistZigZag::new(&c0, 0, 1, 0, 0, 1, 0).unwrap();
        let sels = z.refined_selections();
        assert_eq!(sels.len(), 2);
        assert!(sels.iter().all(|s| s.sign() == 1));
        let c = rank2(-1);
        let z = DistZigZag::new(&c, 0, 1, 1, 0, 1, 0).unwrap();
        let tags: Vec<Tag> = z.refined_selections().into_iter().map(|s| s.tags[0]).collect();
        assert_eq!(tags, vec![Tag::SouthWest, Tag::NorthWest, Tag::Top(1)]);
        let z = DistZigZag::new(&c, 0, 1, 0, 1, 2, 0).unwrap();
        for sel in z.refined_selections().iter().filter(|s| s.tags[0] == Tag::SouthWest) {
            assert!(matches!(sel.tags[1], Tag::SouthWest | Tag::Bottom(_)));
        }
    }

    #[test]
    fn complements_are_acyclic() {
        for d in 0..=4 {
            let c = rank2(-d);
            for k in 0..=d as u32 {
                for m in 1..=3 {
                    let z = DistZigZag::new(&c, 0, 1, k, d as u32 - k, m, 0).unwrap();
                    for sel in z.refined_selections() {
                        let order = topological_order(&z.vertices(), &sel.complement(&z));
                        assert!(order.is_ok(), "{z} {sel}");
                    }
                    assert_eq!(topological_order(&z.vertices(), &z.graph().edges), Err(AlgebraError::Cyclic));
                }
            }
        }
    }

    #[test]
    fn telescoping_identity() {
        for d in 0..=4 {
            let c = rank2(-d);
            for k in 0..=d as u32 {
                for m in 1..=3 {
                    let z = DistZigZag::new(&c, 0, 1, k, d as u32 - k, m, 0).unwrap();
                    assert!(z.verify_selection_identity(true).is_ok(), "{z}");
                    assert!(z.verify_selection_identity(false).is_ok(), "{z}");
                }
            }
        }
    }
}
