use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The loss is too large for the first-order (small-loss) model to hold.
    #[error("out of small-loss regime: beta*|A(omega)| = {loss:.3e} >= 1 at omega = {omega}")]
    OutOfRegime { omega: f64, loss: f64 },

    /// Several frequencies of a band violate the small-loss regime.
    #[error("out of small-loss regime at {} frequencies (first: {:?})", .omegas.len(), .omegas.first())]
    BandOutOfRegime { omegas: Vec<f64> },

    /// Evaluation at (or too close to) the point source.
    #[error("singular point: travel time {tau:.3e} s is below the near-field cutoff")]
    Singular { tau: f64 },

    /// Evaluation on the symmetry axis where the in-plane direction is undefined.
    #[error("point lies on the symmetry axis (R = {radius:.3e})")]
    AxisDegenerate { radius: f64 },

    /// The root of the confocal equation was requested on the wrong side of the wavefront.
    #[error("h = {h} is not inside (0, tau = {tau})")]
    WrongBranch { h: f64, tau: f64 },

    /// The polarization operator of this mode is not a quadratic form.
    #[error("mode {mode} has no quadratic polarization operator for this medium")]
    UnsupportedMode { mode: usize },

    /// A zero direction vector was supplied where a direction is required.
    #[error("degenerate direction: the direction vector is zero")]
    DegenerateDirection,

    /// Invalid medium parameters or an inconsistent catalog request.
    #[error("invalid medium: {0}")]
    InvalidMedium(String),

    /// A numerical procedure did not reach the requested accuracy within its budget.
    #[error("accuracy error: {what} reached {achieved:.3e} (requested {requested:.3e})")]
    Accuracy {
        what: &'static str,
        achieved: f64,
        requested: f64,
    },

    /// A finite-difference stencil would cross the source.
    #[error("geometry error: {0}")]
    Geometry(String),

    /// Malformed field volume data.
    #[error("format error: {0}")]
    Format(String),
}
