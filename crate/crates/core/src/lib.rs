//! Executable tree-automorphism calculi for the Grigorchuk groups `G_ω` and
//! the universal group `U` of the family, realized as a six-letter automaton
//! group, together with growth computation, marked-group distances,
//! branch-structure certificates and boundary-stabilizer invariant random
//! subgroups.

pub mod enumerate;
pub mod error;
pub mod gomega;
pub mod irs;
pub mod marked;
pub mod omega;
pub mod periodic;
pub mod universal;
pub mod words;

pub use enumerate::{ContextGroup, GroupContext, GrowthTable};
pub use error::{Error, Result};
pub use gomega::{BinVertex, GrigorchukGroup, Order, SectionDecomp2};
pub use irs::{EmpiricalIrs, Fingerprint, Membership, Ray};
pub use marked::MarkedPoint;
pub use omega::{LambdaFamily, OmegaClass, OmegaSeq};
pub use universal::{HexVertex, SectionDecomp6, UniversalGroup};
pub use words::{Letter, Word};
