//! The space `V(j, n, q)` of functions on `j`-spaces and the codes in it.

mod code;
mod search;
mod vector;

pub use code::{build_code, shared_code, Code, CodeKind, CodeParams};
pub use search::{
    code_size, enumerable, enumerate_codewords, heuristic_min_weight, min_weight, min_words, spectrum, words_up_to,
    Codewords, SmallWords, Spectrum, WeightReport, DEFAULT_WORD_CAP,
};
pub use vector::{kspace_word, CodeVector};
