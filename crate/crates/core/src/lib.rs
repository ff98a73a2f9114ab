//! Spectral toolkit for signed graphs on at most 64 vertices.
//!
//! Graphs are stored as pairs of bitmask adjacency rows. On top of that the
//! crate provides balance and switching ([`graph`]), canonical forms under
//! switching isomorphism ([`canon`]), dense and exact spectra with equitable
//! quotients ([`spectra`]), the extremal families `Γ_{n,t}`, U, Z1, Z2, W
//! ([`families`]), unbalanced substructure detection ([`forbidden`]),
//! exhaustive and heuristic extremal search ([`search`]) and replayable check
//! suites ([`verify`]).

pub mod canon;
pub mod error;
pub mod families;
pub mod forbidden;
pub mod graph;
pub mod io;
pub mod search;
pub mod spectra;
pub mod verify;

pub use canon::{canonical_form, canonical_key, is_switching_isomorphic, CanonicalKey};
pub use error::{Error, Result};
pub use families::{build, FamilyKind, FamilySpec};
pub use forbidden::{find_witness, is_free, ForbiddenFamily, Witness};
pub use graph::{negative_edge_minimize, Limits, Sign, SignedGraph, SwitchingSet, MAX_VERTICES};
pub use io::{read_graph, write_graph};
pub use search::{run_search, SearchCertificate, SearchConfig, SearchMode, Verdict};
pub use spectra::{adjacency, lambda1, spectrum, SpectrumReport, SymmetricMatrix};
pub use verify::{run_suite, Suite, VerifyOptions, VerifyReport};
