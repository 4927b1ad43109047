//! Exact arithmetic for rank-2 hermitian lattices over a ramified quadratic
//! extension of Q_p: local-density polynomials, a brute-force counting oracle,
//! intersection numbers of special cycles, and the identities binding them.

pub mod cycles;
pub mod density;
pub mod error;
pub mod hironaka;
pub mod lattice;
pub mod local_ring;
pub mod oracle;
pub mod poly;
pub mod ser;
pub mod verify;

pub use density::{alpha_poly, alpha_prime, alpha_value_at_one, beta_poly_h, SType};
pub use error::{Error, Result};
pub use lattice::{normalize, parse_gram, CanonicalForm, CosetLabel, CosetRep, GramMatrix};
pub use local_ring::{FieldElement, FieldParams, GaussNumber, RamifiedElement};
pub use poly::DensityPolynomial;
pub use oracle::{
    alpha_bruteforce, build_s_r, calibrate_convention, count_representations, stabilized_alpha, Calibration,
    Convention, CountJob, Stabilized,
};
pub use cycles::{
    assemble_intersection, decompose_special_cycle, lifting_length, lifting_length_inductive, mu_q, pair_intersection,
    z_dot_special, CycleComponent, IntersectionReport,
};
pub use verify::{
    verify_assembly, verify_hironaka, verify_interpolation, verify_kr, verify_recursion_suite, verify_value_at_one,
    VerificationOutcome,
};
