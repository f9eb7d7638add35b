//! Exact computer algebra for quantum loop groups of symmetric Cartan matrices:
//! trigonometric shuffle algebras and their wheel conditions, zig-zag relations,
//! straightening in the free algebra, and the Hopf pairing by constant terms.

pub mod cartan;
pub mod error;
pub mod freealg;
pub mod json;
pub mod multipoly;
pub mod pairing;
pub mod scalars;
pub mod shuffle;
pub mod zigzag;

pub use cartan::{CartanMatrix, ZetaPair};
pub use error::{AlgebraError, Result};
pub use freealg::{non_increasing, straighten, FreeElem, Letter, Straightener, Word};
pub use multipoly::{MLaurent, Mono, Order, Subst, VarId};
pub use pairing::{associated_polynomial, constant_term, leading_word, pair_uu, pair_uv, pair_vu, CTProblem};
pub use scalars::{qbinomial, qrat_eval, QPoly, QRat, Rat};
pub use shuffle::{shuffle_mul, upsilon, GeomElem, Kernel, ShufElem, Sign, WheelWitness};
pub use zigzag::{DistZigZag, Edge, GeneralZigZag, RefinedSelection, Tag, Vertex};
