//! Corpus stylometry toolkit.
//!
//! The pipeline mirrors a complete stylometric study: load a
//! manifest-described corpus, segment it into words and sentences,
//! measure language complexity (mean word length, big-word share, mean
//! sentence length), count category-lexicon hits (pronouns, emotion and
//! politics wordlists with `*` wildcards), evaluate 1-100 composite
//! scores, attach dagger significance marks from bilateral t-tests and
//! two-proportion z-tests, compute the intertextual distance between
//! every pair of texts, and draw the resulting distance matrix as an
//! unrooted neighbor-joining tree (Newick, DOT, SVG).
//!
//! Numeric code is generic over the [`scalar::Real`] scalar (`f32` or
//! `f64`); the aliases below fix `f64`, the precision used by the CLI.

pub mod composite;
pub mod corpus;
pub mod distance;
pub mod lexicon;
pub mod metrics;
pub mod pipeline;
pub mod report;
pub mod scalar;
pub mod stats;
pub mod tokenizer;
pub mod tree;

pub use scalar::Real;

/// Default-precision aliases over `f64`.
pub type ComplexityProfileF64 = metrics::ComplexityProfile<f64>;
pub type StyleProfileF64 = metrics::StyleProfile<f64>;
pub type CompositeDefinitionF64 = composite::CompositeDefinition<f64>;
pub type TestResultF64 = stats::TestResult<f64>;
pub type DistanceMatrixF64 = distance::DistanceMatrix<f64>;
pub type StyleTreeF64 = tree::StyleTree<f64>;
pub type StyleTableF64 = report::StyleTable<f64>;
pub type SummaryRowF64 = corpus::SummaryRow<f64>;
