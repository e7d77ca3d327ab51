//! Exact computation of the integers
//!
//! ```text
//! C = ∂_{w_m}(ε_n^{a_m} ∂_{w_{m-1}}(ε_n^{a_{m-1}} ... ∂_{w_1}(ε_n^{a_1}) ...))
//! ```
//!
//! which are the self-intersection numbers of the smooth fibre of a
//! Bott-Samelson resolution of a Schubert variety in `GL_N / P_M`. A prime
//! `p | C` forces `p`-torsion in the integral intersection cohomology of the
//! Schubert variety.
//!
//! The crate provides:
//!
//! * [`poly`]: sparse integer polynomials, the symmetric-group action and
//!   divided differences;
//! * [`symgroup`]: words, subexpressions, roots, parabolic cosets;
//! * [`seed`]: the reduced expression `x` built from seed data, with
//!   brute-force checks of its combinatorial properties;
//! * [`fixed`]: torus-fixed points, chart weights and normal-bundle weights;
//! * [`euler`]: combinatorial classes, push-forwards, and both routes to `C`;
//! * [`search`] and [`factor`]: a resumable sweep of seed space.

pub mod error;
pub mod euler;
pub mod factor;
pub mod fixed;
pub mod perm;
pub mod poly;
pub mod report;
pub mod search;
pub mod seed;
pub mod symgroup;

pub use error::{Error, Result, SeedError};
pub use euler::{
    check_lemma_inv, compute_both, compute_c_direct, compute_c_euler, euler_class_cross_check,
    euler_class_polys, push_by_localization, push_to_point, CombinatorialClass,
};
pub use fixed::{fibre_fixed_points, normal_bundle_weights, Enumeration, FixedPoint, WeightList};
pub use perm::Permutation;
pub use poly::Polynomial;
pub use report::{compute_report, ComputeReport};
pub use search::{enumerate_seeds, run_search, SearchBounds, SearchOptions, SearchRecord};
pub use seed::{
    build_x, build_z_block, check_lemma_sub, check_lemma_xprop, BuiltExpression, CheckStatus,
    SeedData,
};
pub use symgroup::{
    act_on_root, coset_equal, is_min_coset_rep, longest_element, Parabolic, Root, Subexpression,
    Word,
};
