mod affine;
mod garnir;
mod kleshchev;
mod partition;
mod tableau;

pub use affine::{affine_tableaux, AffineMultipartition, SequenceKind, WeightSequence};
pub use garnir::{garnir, last_garnir, Garnir};
pub use kleshchev::{good_node, is_kleshchev, reduce_signature, signature, KleshchevOracle, Signature};
pub use partition::{partitions, residue, Comparison, Cut, Multicomposition, Multipartition, Node};
pub use tableau::{b_k, y_exponents, StandardTableau};
