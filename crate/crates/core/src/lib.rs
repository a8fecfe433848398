//! Complex extension of the Dirac delta: Gaussian-regularized plane-wave kernels,
//! their wedge-shaped convergence domains, and Sokhotski-Plemelj functionals acting
//! on analytic test functions along complex paths.

pub mod contour;
pub mod error;
pub mod functionals;
pub mod kernels;
pub mod quadrature;
pub mod special;
pub mod tilted;

pub use contour::{
    classify_point, deform_at_origin, path_in_domain, Contour, CrossingGeometry, DomainKind, IntegrationOptions,
    Membership, PathMembership, Segment, Side, WedgeDomain,
};
pub use error::{Error, Result};
pub use functionals::{
    cross_check, delta_action, functional, lambda_route, overlap_delta, overlap_kernel, plemelj_minus, plemelj_plus,
    pv_contour, semicircle_route, DecayClass, FunctionalResult, Kernel, PrincipalValue, RouteComparison, TestFunction,
};
pub use kernels::{
    direct_quadrature, full_line_kernel, half_line_kernel, j_closed_form, kernel_limit, kernel_limit_full,
    kernel_limit_mirror, KernelKind, KernelResult, RegularizationSchedule, Status,
};
pub use num_complex::Complex64;
pub use quadrature::{extrapolate_to_zero, integrate, Extrapolated, Integral, Tolerance};
pub use special::{asymptotic_factor, erfc, erfcx, Tagged};
pub use tilted::{arg_limit, arg_regularized, log_regularized, tilted_plemelj, TiltedLine, TiltedResult};
