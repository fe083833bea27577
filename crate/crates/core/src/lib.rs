//! Exact stable and symmetry-induced energy degeneracies of translation-invariant
//! Ising models on finite abelian groups.

pub mod blocks;
pub mod constructions;
pub mod correlation;
pub mod degeneracy;
pub mod error;
pub mod exact;
pub mod field;
pub mod golden;
pub mod group;
pub mod kernel;
pub mod spin;
pub mod substitution;
pub mod symmetry;

pub use correlation::{
    correlate, correlate_fast, energy, even_projection, extended_correlate, fourier_power_check,
    CorrelationVector, ExtendedCorrelation, Interaction,
};
pub use blocks::{blocks_of, delta_from_profile, laplacian, reconstruct_from_delta, BlockProfile, SignedMultiset};
pub use constructions::{legendre_config, reduced_difference_sets, singer_difference_set, DifferenceSet};
pub use degeneracy::{d_stab, fiber, msd, survey, MsdRow, SearchOptions, SurveyRow};
pub use error::{Error, Result};
pub use group::{automorphisms, quotient_map, Automorphism, GroupElement, GroupSpec, QuotientMap};
pub use spin::SpinConfig;
pub use substitution::{verify_reversal_identity, SubstitutionWord};
pub use symmetry::{act_phi, d_sym, SymElement};
