//! Universal entanglers on bipartite systems `C^m ⊗ C^n`.
//!
//! A gate is a universal entangler when it maps every product state to an
//! entangled state. This crate provides
//!
//! * the exact decision of when such gates exist ([`segre`]),
//! * numerical certification of a given gate through its maximal product
//!   overlap `Λ(U)` ([`overlap`]),
//! * Haar-random sampling, Monte Carlo studies and a search for gates with a
//!   large guaranteed output entanglement ([`search`]),
//! * the state-level machinery these rest on ([`linalg`], [`states`]), and the
//!   file formats used by the `entangler` CLI ([`io`], [`report`]).

pub mod io;
pub mod linalg;
pub mod overlap;
pub mod report;
pub mod rng;
pub mod search;
pub mod segre;
pub mod states;

pub use linalg::{ComplexMatrix, ComplexVector, C64};
pub use overlap::{certify, max_product_overlap, CertificationReport, OptimizerConfig, OverlapEstimate, UnitaryGate, Verdict};
pub use search::{haar_study, haar_unitary, search_entangler, HaarStudyResult, SearchBudget, SearchResult};
pub use segre::{exists_universal_entangler, is_product, segre_embed, ExistenceVerdict};
pub use states::{BipartiteDims, ProductPair, PureState};
