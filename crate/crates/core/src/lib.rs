//! Exact computations with Grothendieck–Witt classes over base fields and
//! finite étale algebras: trace transfers, classification of quadratic
//! forms, unstable Grothendieck–Witt classes, and global and local unstable
//! A¹-Brouwer degrees of pointed rational functions.

pub mod error;
pub mod classify;
pub mod degree;
pub mod etale;
pub mod field;
pub mod gw;
pub mod matrix;
pub mod number_theory;
pub mod poly;
pub mod square_class;
pub mod unstable;

pub use error::{Error, Result};
pub use field::{FieldSpec, PrimeModulus, Scalar};
pub use number_theory::{hilbert_symbol, legendre_symbol, Place};
pub use poly::{poly_gcd, resultant, root_multiplicity, Polynomial};
pub use square_class::{is_square, reduce_square_class, SquareClass};
pub use etale::{make_etale_algebra, Algebra, AlgebraElement, EtaleAlgebra};
pub use gw::{add_gw, get_diagonal_class, make_gw_class, multiply_gw, transfer_gw, transfer_gw_entrywise, GrothendieckWittClass};
pub use matrix::{Matrix, RingElem};
pub use classify::{get_invariants, get_witt_decomposition, is_isomorphic_gw, FormInvariants, WittDecomposition};
pub use degree::{
    bezoutian_matrix, check_poincare_hopf, global_unstable_degree, local_newton_coefficient, local_unstable_degree,
    make_pointed, PointedRationalFunction,
};
pub use unstable::{
    add_gwu, add_gwu_divisorial, get_sum_decomposition_gwu, is_isomorphic_gwu, make_diagonal_unstable_form,
    make_gwu, make_gwu_with_scalar, make_hyperbolic_unstable_form, Compatibility, UnstableGWClass,
};
