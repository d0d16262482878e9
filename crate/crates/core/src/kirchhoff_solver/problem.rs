use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fem_space::{Domain, Point};

pub type ScalarField = Arc<dyn Fn(Point) -> f64 + Send + Sync>;
pub type VectorField = Arc<dyn Fn(Point) -> Point + Send + Sync>;
pub type SpaceTimeField = Arc<dyn Fn(Point, f64) -> f64 + Send + Sync>;

/// Kirchhoff coefficient `a(·)` with its declared bounds
/// `0 < m₁ ≤ a ≤ m₂` and Lipschitz constant.
#[derive(Clone)]
pub struct KirchhoffCoefficient {
    func: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    lower: f64,
    upper: f64,
    lipschitz: f64,
}

impl KirchhoffCoefficient {
    pub fn new(
        func: impl Fn(f64) -> f64 + Send + Sync + 'static,
        lower: f64,
        upper: f64,
        lipschitz: f64,
    ) -> Result<Self> {
        if !(lower > 0.0) {
            return Err(Error::invalid("m1", format!("must be positive, got {lower}")));
        }
        if !(upper >= lower) || !upper.is_finite() {
            return Err(Error::invalid("m2", format!("must be finite and >= m1, got {upper}")));
        }
        if !(lipschitz >= 0.0) || !lipschitz.is_finite() {
            return Err(Error::invalid("L", format!("must be finite and non-negative, got {lipschitz}")));
        }
        Ok(KirchhoffCoefficient {
            func: Arc::new(func),
            lower,
            upper,
            lipschitz,
        })
    }

    /// `a ≡ value`.
    pub fn constant(value: f64) -> Result<Self> {
        Self::new(move |_| value, value, value, 0.0)
    }

    /// `a(w) = 3 + sin w`, bounded in `[2, 4]` with Lipschitz constant 1.
    pub fn three_plus_sine() -> Self {
        Self::new(|w: f64| 3.0 + w.sin(), 2.0, 4.0, 1.0).expect("valid bounds")
    }

    #[inline]
    pub fn eval(&self, w: f64) -> f64 {
        (self.func)(w)
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }
}

impl fmt::Debug for KirchhoffCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KirchhoffCoefficient")
            .field("lower", &self.lower)
            .field("upper", &self.upper)
            .field("lipschitz", &self.lipschitz)
            .finish_non_exhaustive()
    }
}

/// Initial datum in `H¹₀ ∩ H²`: its values, its gradient, and optionally its
/// Laplacian.
#[derive(Clone)]
pub struct InitialDatum {
    pub value: ScalarField,
    pub gradient: VectorField,
    pub laplacian: Option<ScalarField>,
}

impl InitialDatum {
    pub fn new(
        value: impl Fn(Point) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(Point) -> Point + Send + Sync + 'static,
    ) -> Self {
        InitialDatum {
            value: Arc::new(value),
            gradient: Arc::new(gradient),
            laplacian: None,
        }
    }

    pub fn with_laplacian(mut self, laplacian: impl Fn(Point) -> f64 + Send + Sync + 'static) -> Self {
        self.laplacian = Some(Arc::new(laplacian));
        self
    }

    pub fn zero() -> Self {
        InitialDatum::new(|_| 0.0, |_| [0.0, 0.0]).with_laplacian(|_| 0.0)
    }
}

impl fmt::Debug for InitialDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InitialDatum")
            .field("has_laplacian", &self.laplacian.is_some())
            .finish_non_exhaustive()
    }
}

/// Problem data for
/// `D^α u − a(‖∇u‖²) Δu = f`, `u|∂Ω = 0`, `u(0) = u₀`, `uₜ(0) = u₁`.
#[derive(Clone)]
pub struct ProblemSpec {
    alpha: f64,
    final_time: f64,
    domain: Domain,
    coefficient: KirchhoffCoefficient,
    forcing: SpaceTimeField,
    u0: InitialDatum,
    u1: InitialDatum,
}

impl ProblemSpec {
    pub fn new(
        alpha: f64,
        final_time: f64,
        domain: Domain,
        coefficient: KirchhoffCoefficient,
        forcing: impl Fn(Point, f64) -> f64 + Send + Sync + 'static,
        u0: InitialDatum,
        u1: InitialDatum,
    ) -> Result<Self> {
        if !(alpha > 1.0 && alpha < 2.0) {
            return Err(Error::invalid("alpha", format!("must lie in (1, 2), got {alpha}")));
        }
        if !(final_time > 0.0) || !final_time.is_finite() {
            return Err(Error::invalid("T", format!("must be positive, got {final_time}")));
        }
        Ok(ProblemSpec {
            alpha,
            final_time,
            domain,
            coefficient,
            forcing: Arc::new(forcing),
            u0,
            u1,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Order of each reduced Caputo derivative, `β = α/2`.
    pub fn beta(&self) -> f64 {
        0.5 * self.alpha
    }

    pub fn final_time(&self) -> f64 {
        self.final_time
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn coefficient(&self) -> &KirchhoffCoefficient {
        &self.coefficient
    }

    #[inline]
    pub fn forcing(&self, p: Point, t: f64) -> f64 {
        (self.forcing)(p, t)
    }

    pub fn u0(&self) -> &InitialDatum {
        &self.u0
    }

    pub fn u1(&self) -> &InitialDatum {
        &self.u1
    }
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("alpha", &self.alpha)
            .field("final_time", &self.final_time)
            .field("domain", &self.domain)
            .field("coefficient", &self.coefficient)
            .finish_non_exhaustive()
    }
}
