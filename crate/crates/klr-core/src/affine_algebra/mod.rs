mod braid;
mod element;
mod engine;
mod perm;
mod words;

pub use braid::{find_path, moves, Move};
pub use element::{psi_degree, AffineElement, Degree, GeneratorWord, KLMonomial, Letter, TermRecord};
pub use engine::{all_sequences, Fold, Klr, Strategy};
pub use perm::Perm;
pub use words::{add_node_word, e_lambda_y_lambda, psi_st_word};
