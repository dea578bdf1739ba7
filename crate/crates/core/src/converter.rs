//! Quasi-static floating displacement–force converter.
//!
//! The working spring `f` is attached on one side of the balance point and the
//! pulley-realized inverse element on the other. Moving the balance point to
//! `u` stretches the spring to `u`. The counter cable engages only once the
//! offset gap `gap_x` has been closed, after which the pulley turns by
//! `(u − gap_x)/R`. The operating force is what an operator must apply at the
//! balance point to hold it there.

use crate::characteristics::ForceCharacteristic;
use crate::error::{Error, Result};
use crate::pulley::{self, CounterElement, PulleyProfile};
use crate::quad;
use crate::scalar::{clamp_to_closed, Scalar};

/// Number of grid points the energy ledger integrates the operating force on.
pub const LEDGER_POINTS: usize = 1024;
/// Grid points scanned for a sign change before bisecting.
const EQUILIBRIUM_SCAN: usize = 1025;
/// Force tolerance, N, under which the operating force counts as the applied force.
pub const EQUILIBRIUM_FORCE_TOL: f64 = 1e-9;
/// Displacement tolerance, m, of the equilibrium bisection.
pub const EQUILIBRIUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct FloatingConverter<T> {
    left: ForceCharacteristic<T>,
    profile: PulleyProfile<T>,
    counter: CounterElement<T>,
    gap_x: T,
    friction_mu: T,
    friction_f0: T,
}

/// One row of a [`SweepTable`]. Forces in N, displacement in m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow<T> {
    pub u: T,
    pub spring_force: T,
    pub counter_force: T,
    pub operating_force_ideal: T,
    pub operating_force_plus: T,
    pub operating_force_minus: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable<T> {
    pub gap_x: T,
    pub rows: Vec<SweepRow<T>>,
}

/// Scalar digest of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSummary<T> {
    /// Mean ideal operating force over rows where the counter is engaged.
    pub op_force_const: T,
    /// Max minus min of the ideal operating force over the same rows.
    pub op_force_spread: T,
    /// Largest spring force magnitude in the sweep.
    pub peak_spring_force: T,
    /// Largest operating force magnitude (friction band included) over the
    /// peak spring force.
    pub ratio_peak: T,
    /// Largest pointwise ratio of operating force (friction band included)
    /// to spring force over engaged rows with nonzero spring force.
    pub ratio_pointwise: T,
}

/// Energy changes between two balance-point positions, J.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyLedger<T> {
    pub delta_spring: T,
    pub delta_counter: T,
    pub operator_work: T,
}

impl<T: Scalar> EnergyLedger<T> {
    /// `operator_work − (delta_spring + delta_counter)`.
    pub fn closure_error(&self) -> T {
        self.operator_work - (self.delta_spring + self.delta_counter)
    }
}

/// Outcome of an equilibrium search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Equilibrium<T> {
    /// The applied force is balanced at this displacement.
    At(T),
    /// The operating force equals the applied force everywhere, so every
    /// displacement is an equilibrium.
    Indeterminate,
}

impl<T: Scalar> FloatingConverter<T> {
    /// An ideal converter: zero gap, no friction.
    pub fn new(left: ForceCharacteristic<T>, profile: PulleyProfile<T>, counter: CounterElement<T>) -> Self {
        Self {
            left,
            profile,
            counter,
            gap_x: T::zero(),
            friction_mu: T::zero(),
            friction_f0: T::zero(),
        }
    }

    /// Sets the offset gap, m.
    pub fn with_gap(mut self, gap_x: T) -> Result<Self> {
        if !(gap_x.is_finite() && gap_x >= T::zero()) {
            return Err(Error::validation(format!("gap_x must be >= 0, got {gap_x}")));
        }
        self.gap_x = gap_x;
        Ok(self)
    }

    /// Sets the friction band: `mu` of the transmitted counter force plus a
    /// constant offset `f0`, N.
    pub fn with_friction(mut self, mu: T, f0: T) -> Result<Self> {
        if !(mu >= T::zero() && mu < T::one()) {
            return Err(Error::validation(format!("friction mu must lie in [0, 1), got {mu}")));
        }
        if !(f0.is_finite() && f0 >= T::zero()) {
            return Err(Error::validation(format!("friction offset must be >= 0, got {f0}")));
        }
        self.friction_mu = mu;
        self.friction_f0 = f0;
        Ok(self)
    }

    pub fn left(&self) -> &ForceCharacteristic<T> {
        &self.left
    }

    pub fn profile(&self) -> &PulleyProfile<T> {
        &self.profile
    }

    pub fn counter(&self) -> &CounterElement<T> {
        &self.counter
    }

    pub fn gap_x(&self) -> T {
        self.gap_x
    }

    pub fn friction(&self) -> (T, T) {
        (self.friction_mu, self.friction_f0)
    }

    /// Largest balance-point displacement both elements cover.
    pub fn u_max(&self) -> T {
        self.left
            .x_max()
            .min(self.gap_x + self.profile.radius() * self.profile.theta_max())
    }

    fn check_u(&self, u: T) -> Result<T> {
        clamp_to_closed(u, T::zero(), self.u_max())
            .ok_or_else(|| Error::domain("balance-point displacement", u.as_f64(), 0.0, self.u_max().as_f64()))
    }

    fn counter_angle(&self, u: T) -> T {
        ((u - self.gap_x) / self.profile.radius())
            .max(T::zero())
            .min(self.profile.theta_max())
    }

    /// Force the counter side exerts at `u`; zero while the gap is open.
    pub fn counter_force(&self, u: T) -> Result<T> {
        let u = self.check_u(u)?;
        self.counter_unchecked(u)
    }

    fn counter_unchecked(&self, u: T) -> Result<T> {
        if u < self.gap_x {
            return Ok(T::zero());
        }
        pulley::realized_force(&self.profile, &self.counter, self.counter_angle(u))
    }

    /// Ideal operating force at `u`: spring force minus counter force.
    pub fn operating_force(&self, u: T) -> Result<T> {
        let u = self.check_u(u)?;
        Ok(self.left.force_at(u)? - self.counter_unchecked(u)?)
    }

    /// Half-width of the friction band for a transmitted counter force.
    pub fn friction_band(&self, counter_force: T) -> T {
        self.friction_mu * counter_force.abs() + self.friction_f0
    }

    fn row(&self, u: T) -> Result<SweepRow<T>> {
        let u = self.check_u(u)?;
        let spring_force = self.left.force_at(u)?;
        let counter_force = self.counter_unchecked(u)?;
        let ideal = spring_force - counter_force;
        let band = self.friction_band(counter_force);
        Ok(SweepRow {
            u,
            spring_force,
            counter_force,
            operating_force_ideal: ideal,
            operating_force_plus: ideal + band,
            operating_force_minus: ideal - band,
        })
    }

    /// Tabulates forces on `n` uniform points over `[u_min, u_max]`.
    pub fn sweep(&self, u_min: T, u_max: T, n: usize) -> Result<SweepTable<T>> {
        if n < 2 {
            return Err(Error::validation(format!("sweep needs at least 2 points, got {n}")));
        }
        if !(u_min >= T::zero() && u_min < u_max) {
            return Err(Error::validation(format!(
                "sweep bounds must satisfy 0 <= u_min < u_max, got [{u_min}, {u_max}]"
            )));
        }
        self.check_u(u_max)?;
        let last = T::from_count(n - 1);
        let rows = (0..n)
            .map(|i| {
                let u = if i == n - 1 {
                    u_max
                } else {
                    u_min + (u_max - u_min) * (T::from_count(i) / last)
                };
                self.row(u)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SweepTable {
            gap_x: self.gap_x,
            rows,
        })
    }

    /// Energy exchanged while moving the balance point from `u0` to `u1`.
    pub fn energy_ledger(&self, u0: T, u1: T) -> Result<EnergyLedger<T>> {
        let u0 = self.check_u(u0)?;
        let u1 = self.check_u(u1)?;
        let delta_spring = self.left.stored_energy(u1)? - self.left.stored_energy(u0)?;
        let released = |u: T| -> Result<T> {
            let s = self.profile.payout(self.counter_angle(u))?;
            Ok(self.counter.energy(s))
        };
        let delta_counter = -(released(u1)? - released(u0)?);
        let mut failure = None;
        let operator_work = quad::trapezoid(u0, u1, LEDGER_POINTS - 1, |u| {
            let u = clamp_to_closed(u, T::zero(), self.u_max()).unwrap_or(u);
            match self.left.force_at(u).and_then(|f| Ok(f - self.counter_unchecked(u)?)) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    T::zero()
                }
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(EnergyLedger {
            delta_spring,
            delta_counter,
            operator_work,
        })
    }

    /// Balance-point displacement at which the operating force equals `applied`.
    ///
    /// Only the engaged range `[gap_x, u_max]` is searched, where both elements
    /// act. Scans it for the first crossing and bisects that to
    /// [`EQUILIBRIUM_TOL`]. A residual that is flat at zero everywhere yields
    /// [`Equilibrium::Indeterminate`]; one that never reaches zero is a
    /// [`Error::NoRoot`].
    pub fn equilibrium_displacement(&self, applied: T) -> Result<Equilibrium<T>> {
        let u_hi = self.u_max();
        let u_lo = self.gap_x.min(u_hi);
        let residual = |u: T| -> Result<T> { Ok(self.operating_force(u)? - applied) };
        let grid: Vec<T> = (0..EQUILIBRIUM_SCAN)
            .map(|i| u_lo + (u_hi - u_lo) * (T::from_count(i) / T::from_count(EQUILIBRIUM_SCAN - 1)))
            .collect();
        let values = grid.iter().map(|&u| residual(u)).collect::<Result<Vec<_>>>()?;

        let scale = values.iter().fold(applied.abs(), |m, v| m.max(v.abs()));
        let ftol = T::lit(EQUILIBRIUM_FORCE_TOL).max(T::epsilon() * T::lit(64.0) * scale);
        if values.iter().all(|v| v.abs() <= ftol) {
            return Ok(Equilibrium::Indeterminate);
        }
        let start_sign = values[0].signum();
        let reached = |v: T| v.abs() <= ftol || v.signum() != start_sign;
        if reached(values[0]) {
            return Ok(Equilibrium::At(u_lo));
        }
        let Some(i) = values.iter().position(|&v| reached(v)) else {
            return Err(Error::NoRoot(format!(
                "operating force never reaches {applied} N on [{u_lo}, {u_hi}] m"
            )));
        };
        let mut failure = None;
        let u = quad::bisect_predicate(grid[i - 1], grid[i], T::lit(EQUILIBRIUM_TOL), |u| match residual(u) {
            Ok(v) => reached(v),
            Err(e) => {
                failure.get_or_insert(e);
                true
            }
        });
        match failure {
            Some(e) => Err(e),
            None => Ok(Equilibrium::At(u)),
        }
    }
}

impl<T: Scalar> SweepTable<T> {
    pub fn summary(&self) -> SweepSummary<T> {
        let engaged: Vec<&SweepRow<T>> = self.rows.iter().filter(|r| r.u >= self.gap_x).collect();
        let basis: Vec<&SweepRow<T>> = if engaged.is_empty() {
            self.rows.iter().collect()
        } else {
            engaged
        };
        let count = T::from_count(basis.len().max(1));
        let op_force_const = basis.iter().fold(T::zero(), |acc, r| acc + r.operating_force_ideal) / count;
        let (lo, hi) = basis.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), r| {
            (lo.min(r.operating_force_ideal), hi.max(r.operating_force_ideal))
        });
        let magnitude = |r: &SweepRow<T>| r.operating_force_plus.abs().max(r.operating_force_minus.abs());
        let peak_spring_force = self.rows.iter().fold(T::zero(), |m, r| m.max(r.spring_force.abs()));
        let peak_op = self.rows.iter().fold(T::zero(), |m, r| m.max(magnitude(r)));
        let ratio_peak = if peak_spring_force > T::zero() {
            peak_op / peak_spring_force
        } else {
            T::zero()
        };
        let ratio_pointwise = basis
            .iter()
            .filter(|r| r.spring_force != T::zero())
            .fold(T::zero(), |m, r| m.max(magnitude(r) / r.spring_force.abs()));
        SweepSummary {
            op_force_const,
            op_force_spread: if basis.is_empty() { T::zero() } else { hi - lo },
            peak_spring_force,
            ratio_peak,
            ratio_pointwise,
        }
    }
}
