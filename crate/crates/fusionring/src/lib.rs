//! Exact computation of the Burnside ring and twisted Burnside ring of a
//! finite group.
//!
//! The untwisted ring is spanned by conjugacy classes of subgroups with the
//! double-coset product; the twisted ring is spanned by pairs of a subgroup
//! class and a second-cohomology class (a Schur multiplier), multiplied by
//! the same double-coset decomposition with cocycle restriction and
//! transport. Second cohomology is computed exactly from the normalized bar
//! resolution via integer Smith normal form, with a coefficient
//! stabilization step that cuts ℤ/m coefficients down to k× classes.
//!
//! Everything is deterministic: canonical element order, canonical subgroup
//! class order, canonical cohomology coordinates, smallest-pivot Smith
//! reduction with fixed scan order.

pub mod burnside;
pub mod cache;
pub mod cli;
pub mod cocycle;
pub mod cohomology;
pub mod group;
pub mod groupspec;
pub mod linalg;
pub mod perm;
pub mod structure;
pub mod subgroup;
pub mod twisted;
pub mod verify;

pub use burnside::{BurnsideElement, BurnsideRing, MarksVector};
pub use cocycle::{Cochain1, Cochain2};
pub use cohomology::{h2_mod_m, h2_units, CohomologyCaps, H2Group};
pub use group::{named_group, FiniteGroup, GroupError};
pub use perm::Permutation;
pub use subgroup::{double_cosets, Subgroup, SubgroupClassTable};
pub use twisted::{FusionBasisKey, FusionRing, TwistedElement};
pub use verify::{verify_group, VerifyLevel};
