//! Force–displacement laws of elastic elements.
//!
//! Displacement is the extension from the element's natural length, in
//! metres, on the closed domain `[0, x_max]`. Forces are in newtons and
//! energies in joules.

use crate::error::{Error, Result};
use crate::quad;
use crate::scalar::{clamp_to_closed, Scalar};

/// Panel count used by [`ForceCharacteristic::stored_energy`] when no
/// closed form is available.
pub const DEFAULT_ENERGY_PANELS: usize = 2048;

/// The functional form of a [`ForceCharacteristic`].
#[derive(Debug, Clone, PartialEq)]
pub enum Law<T> {
    /// `F = k x`.
    Linear { stiffness: T },
    /// `F = f0` for every displacement.
    Constant { force: T },
    /// `F = c / (x + d)^p`, a monotone stand-in for magnet-like attraction.
    PowerLaw { c: T, d: T, p: T },
    /// Piecewise-linear interpolation of `(x, F)` knots.
    Tabulated(Vec<(T, T)>),
    /// The exact negation of another characteristic.
    Negated(Box<ForceCharacteristic<T>>),
}

/// A validated force–displacement law on `[0, x_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceCharacteristic<T> {
    law: Law<T>,
    x_max: T,
}

fn check_x_max<T: Scalar>(x_max: T) -> Result<()> {
    if x_max.is_finite() && x_max > T::zero() {
        Ok(())
    } else {
        Err(Error::validation(format!(
            "max extension must be positive and finite, got {x_max}"
        )))
    }
}

fn check_finite<T: Scalar>(name: &str, v: T) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::validation(format!("{name} must be finite, got {v}")))
    }
}

impl<T: Scalar> ForceCharacteristic<T> {
    pub fn linear(stiffness: T, x_max: T) -> Result<Self> {
        check_finite("stiffness", stiffness)?;
        check_x_max(x_max)?;
        Ok(Self {
            law: Law::Linear { stiffness },
            x_max,
        })
    }

    pub fn constant(force: T, x_max: T) -> Result<Self> {
        check_finite("constant force", force)?;
        check_x_max(x_max)?;
        Ok(Self {
            law: Law::Constant { force },
            x_max,
        })
    }

    /// `F = c / (x + d)^p` with `d > 0` and `p >= 1`, so the law has no
    /// singularity inside the domain.
    pub fn power_law(c: T, d: T, p: T, x_max: T) -> Result<Self> {
        check_finite("c", c)?;
        check_x_max(x_max)?;
        if !(d.is_finite() && d > T::zero()) {
            return Err(Error::validation(format!(
                "power-law offset d must be positive, got {d}"
            )));
        }
        if !(p.is_finite() && p >= T::one()) {
            return Err(Error::validation(format!("power-law exponent p must be >= 1, got {p}")));
        }
        Ok(Self {
            law: Law::PowerLaw { c, d, p },
            x_max,
        })
    }

    /// Piecewise-linear law through `points`. The first knot must sit at
    /// `x = 0` and knots must be strictly increasing in `x`; the last knot
    /// fixes `x_max`.
    pub fn tabulated(points: Vec<(T, T)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::validation("tabulated characteristic needs at least two points"));
        }
        for (i, &(x, f)) in points.iter().enumerate() {
            if !(x.is_finite() && f.is_finite()) {
                return Err(Error::validation(format!("tabulated point {i} is not finite")));
            }
        }
        if points[0].0 != T::zero() {
            return Err(Error::validation(format!(
                "tabulated points must start at x = 0, got {}",
                points[0].0
            )));
        }
        if let Some(i) = points.windows(2).position(|w| w[1].0 <= w[0].0) {
            return Err(Error::validation(format!(
                "tabulated x must be strictly increasing (points {i} and {})",
                i + 1
            )));
        }
        let x_max = points[points.len() - 1].0;
        Ok(Self {
            law: Law::Tabulated(points),
            x_max,
        })
    }

    pub fn law(&self) -> &Law<T> {
        &self.law
    }

    pub fn x_max(&self) -> T {
        self.x_max
    }

    /// Stiffness of a linear law, `None` for every other form.
    pub fn stiffness(&self) -> Option<T> {
        match self.law {
            Law::Linear { stiffness } => Some(stiffness),
            _ => None,
        }
    }

    fn check_domain(&self, x: T) -> Result<T> {
        clamp_to_closed(x, T::zero(), self.x_max)
            .ok_or_else(|| Error::domain("displacement", x.as_f64(), 0.0, self.x_max.as_f64()))
    }

    /// Force at displacement `x`.
    pub fn force_at(&self, x: T) -> Result<T> {
        let x = self.check_domain(x)?;
        Ok(self.eval(x))
    }

    /// Unchecked evaluation; `x` must already lie in the domain.
    pub(crate) fn eval(&self, x: T) -> T {
        match &self.law {
            Law::Linear { stiffness } => *stiffness * x,
            Law::Constant { force } => *force,
            Law::PowerLaw { c, d, p } => *c / (x + *d).powf(*p),
            Law::Tabulated(points) => interpolate(points, x),
            Law::Negated(inner) => -inner.eval(x),
        }
    }

    /// Energy stored between the natural length and `x`, `∫₀ˣ F dξ`.
    ///
    /// Linear and constant laws use their closed forms; other laws use the
    /// composite trapezoid rule with [`DEFAULT_ENERGY_PANELS`] panels.
    pub fn stored_energy(&self, x: T) -> Result<T> {
        self.stored_energy_with_panels(x, DEFAULT_ENERGY_PANELS)
    }

    pub fn stored_energy_with_panels(&self, x: T, panels: usize) -> Result<T> {
        let x = self.check_domain(x)?;
        Ok(self.energy(x, panels))
    }

    /// Stored energy by trapezoid quadrature only, bypassing closed forms.
    pub fn stored_energy_quadrature(&self, x: T, panels: usize) -> Result<T> {
        let x = self.check_domain(x)?;
        Ok(quad::trapezoid(T::zero(), x, panels, |xi| self.eval(xi)))
    }

    fn energy(&self, x: T, panels: usize) -> T {
        match &self.law {
            Law::Linear { stiffness } => T::lit(0.5) * *stiffness * x * x,
            Law::Constant { force } => *force * x,
            Law::Negated(inner) => -inner.energy(x, panels),
            _ => quad::trapezoid(T::zero(), x, panels, |xi| self.eval(xi)),
        }
    }

    /// The inverse characteristic `g(x) = -f(x)` on the same domain.
    ///
    /// Inverting an already negated law unwraps it.
    pub fn invert(&self) -> Self {
        match &self.law {
            Law::Negated(inner) => (**inner).clone(),
            _ => Self {
                law: Law::Negated(Box::new(self.clone())),
                x_max: self.x_max,
            },
        }
    }

    /// Smallest displacement at which the law produces `target`, assuming it
    /// is monotone. `None` when `target` is not attained on the domain.
    pub fn displacement_for_force(&self, target: T) -> Option<T> {
        if !target.is_finite() {
            return None;
        }
        match &self.law {
            Law::Linear { stiffness } => {
                if *stiffness == T::zero() {
                    return (target == T::zero()).then_some(T::zero());
                }
                clamp_to_closed(target / *stiffness, T::zero(), self.x_max)
            }
            Law::Constant { force } => (target == *force).then_some(T::zero()),
            Law::Tabulated(points) => invert_tabulated(points, target),
            _ => self.bisect_inverse(target),
        }
    }

    fn bisect_inverse(&self, target: T) -> Option<T> {
        let lo = self.eval(T::zero()) - target;
        if lo == T::zero() {
            return Some(T::zero());
        }
        let hi = self.eval(self.x_max) - target;
        if hi == T::zero() {
            return Some(self.x_max);
        }
        if lo.signum() == hi.signum() {
            return None;
        }
        let rising = hi > T::zero();
        let reached = |x: T| {
            let g = self.eval(x) - target;
            if rising {
                g >= T::zero()
            } else {
                g <= T::zero()
            }
        };
        Some(quad::bisect_predicate(T::zero(), self.x_max, T::zero(), reached))
    }

    /// Largest absolute force over `n` uniform samples of the domain.
    pub fn peak_force(&self, n: usize) -> T {
        let n = n.max(2);
        (0..n)
            .map(|i| self.eval(self.x_max * T::from_count(i) / T::from_count(n - 1)).abs())
            .fold(T::zero(), T::max)
    }
}

fn interpolate<T: Scalar>(points: &[(T, T)], x: T) -> T {
    let i = points.partition_point(|p| p.0 <= x);
    if i == 0 {
        return points[0].1;
    }
    if i == points.len() {
        return points[points.len() - 1].1;
    }
    let (x0, f0) = points[i - 1];
    let (x1, f1) = points[i];
    if x == x0 {
        return f0;
    }
    f0 + (f1 - f0) * ((x - x0) / (x1 - x0))
}

fn invert_tabulated<T: Scalar>(points: &[(T, T)], target: T) -> Option<T> {
    for w in points.windows(2) {
        let (x0, f0) = w[0];
        let (x1, f1) = w[1];
        if f0 == target {
            return Some(x0);
        }
        if (f0 < target && target <= f1) || (f1 <= target && target < f0) {
            if f1 == target {
                return Some(x1);
            }
            return Some(x0 + (x1 - x0) * ((target - f0) / (f1 - f0)));
        }
    }
    None
}
