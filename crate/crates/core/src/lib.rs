//! Degree-constrained bipartitions and bisections of digraphs.
//!
//! * [`pairing`] samples bisections of tournaments by splitting a random
//!   pairing, with the exact bad-vertex law in [`probability`].
//! * [`lll`] checks the weighted local lemma on bounded in-degree digraphs
//!   and realises it with Moser–Tardos resampling.
//! * [`peeling`] extracts minimal out-degree cores, giving strong splits of
//!   tournaments and (s, t)-splits of multipartite tournaments.
//! * [`oracle`] enumerates small instances exhaustively; [`sweep`] runs
//!   Monte Carlo grids.

pub mod digraph;
pub mod edge_list;
pub mod generators;
pub mod lll;
pub mod oracle;
pub mod pairing;
pub mod peeling;
pub mod probability;
pub mod report;
pub mod sweep;

pub use digraph::{Bipartition, Digraph, GraphError, Side};
pub use edge_list::{read_edge_list, write_edge_list};
pub use lll::{LllParams, LllReport};
pub use pairing::{BadVertex, Pairing, SampleReport};
pub use peeling::{HypothesisGate, MinimalCoreBound, SplitSpec};
pub use probability::{Epsilon, PairProfile, PartnerRelation, Threshold};
pub use report::{SplitCriterion, SplitDocument, SplitParams, Verification};
pub use sweep::{Family, SweepRow};
