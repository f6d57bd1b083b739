//! Exact computations on normal affine toric varieties: cones and fans,
//! Hilbert bases, level polyhedra of the dual cone, critical arrows and the
//! fan of the normalized limit F-blowup.

pub mod arrows;
pub mod cone;
pub mod delta;
pub mod error;
pub mod fan;
pub mod lattice;
pub mod level;
pub mod linalg;
pub mod lp;
pub mod monoid;
pub mod polyhedron;

pub use cone::{dual_cone, dual_face, is_simplicial, is_smooth, minimal_face_containing, Cone};
pub use error::{Error, Result};
pub use lattice::{lattice_ball, pairing, primitive_of, LatticeVector, QuotientLattice, RationalVector, Side};
pub use fan::{check_subdivision, convex_moderate_check, is_crepant, is_moderate, psi_functional, validate_subdivision, Fan};
pub use level::{interior_lattice_point, level_polyhedron, project_slice, ray_sufficient_test, scale_level, LevelPolyhedron};
pub use monoid::{classify_divisors, classify_divisors_bounded, cone_leq, hilbert_basis, minimal_s_sigma, DivisorRecord, HilbertBasis};
pub use arrows::{critical_arrows, critical_arrows_at, critical_arrows_bounded, min_cone_dim_bound, tie_breakers, verify_certificate, CriticalCertificate, TieBreaker};
pub use delta::{delta_fan, delta_star, theta_and_diameter, xi_fingerprint, xi_grid_oracle, DeltaFan, ThetaData};
