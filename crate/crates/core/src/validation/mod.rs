//! Independent numerical oracles. None of them calls into the closed forms
//! they are used to check: the eigensolver, stencils, quadrature rules and
//! root finder here are separate implementations.

mod eigen;
mod fd;
mod kernel;
mod reference;

pub use eigen::{best_assignment, dense_eigensolver, EigenDecomposition};
pub use fd::{fd_hessian, fd_residual, residual_at, FdOrder, OracleConfig, ResidualReport};
pub use kernel::{kernel_ft_oracle, KernelTransform};
pub use reference::{bisection_root, christoffel_from_voigt, gauss_legendre, reference_quadrature};

/// One closed form and the oracle that certifies it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OraclePairing {
    pub closed_form: &'static str,
    pub oracle: &'static str,
    /// Name of the test function exercising the pairing.
    pub test: &'static str,
}

/// Every closed form of the potential and Green tensor modules.
pub const CLOSED_FORMS: &[&str] = &[
    "loss_symbol",
    "eigenstructure",
    "closed_integrals",
    "largest_root_s",
    "hessian_case1",
    "hessian_case2",
    "hessian_general",
    "green_medium1",
    "green_medium2",
    "green_medium3",
    "green_isotropic",
    "time_domain",
];

/// The pairing matrix. A manifest test checks that every entry of
/// [`CLOSED_FORMS`] appears here and that every named test exists.
pub const ORACLE_PAIRINGS: &[OraclePairing] = &[
    OraclePairing { closed_form: "loss_symbol", oracle: "kernel_ft_oracle", test: "loss_model" },
    OraclePairing { closed_form: "eigenstructure", oracle: "dense_eigensolver", test: "eigenstructure_oracle" },
    OraclePairing { closed_form: "closed_integrals", oracle: "reference_quadrature", test: "closed_integrals_vs_reference" },
    OraclePairing { closed_form: "largest_root_s", oracle: "bisection_root", test: "root_finders_agree" },
    OraclePairing { closed_form: "hessian_case1", oracle: "hessian_general", test: "potential_certification" },
    OraclePairing { closed_form: "hessian_case1", oracle: "fd_hessian", test: "static_hessian_matches_fd_potential" },
    OraclePairing { closed_form: "hessian_case2", oracle: "hessian_general", test: "potential_certification" },
    OraclePairing { closed_form: "hessian_general", oracle: "fd_hessian", test: "general_hessian_matches_fd_potential" },
    OraclePairing { closed_form: "hessian_general", oracle: "reference_quadrature", test: "general_integrand_reference_quadrature" },
    OraclePairing { closed_form: "green_medium1", oracle: "fd_residual", test: "pde_residual" },
    OraclePairing { closed_form: "green_medium2", oracle: "fd_residual", test: "pde_residual" },
    OraclePairing { closed_form: "green_medium3", oracle: "fd_residual", test: "pde_residual" },
    OraclePairing { closed_form: "green_isotropic", oracle: "fd_residual", test: "isotropic_residual" },
    OraclePairing { closed_form: "time_domain", oracle: "envelope peak picking", test: "time_domain_arrivals" },
];
