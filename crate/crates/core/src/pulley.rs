//! Non-circular pulley profiles.
//!
//! A profile is a polar curve `r(θ)` sampled on an increasing grid starting at
//! `θ = 0`, paired with the radius `R` of the circular pulley that converts
//! rotation into spring displacement (`x = Rθ`). A cable leaving the profile
//! under tension `T` produces a torque `r(θ)·T`, which the circular pulley
//! turns into a linear force `r(θ)·T / R`.
//!
//! Between samples the radius is linearly interpolated. Payout and arc length
//! are integrated against that interpolant, so a profile that is affine in
//! `θ` is represented exactly.

use crate::characteristics::ForceCharacteristic;
use crate::error::{Error, Result};
use crate::scalar::{clamp_to_closed, Scalar};

/// Sample count used when a caller has no preference.
pub const DEFAULT_SAMPLES: usize = 512;
/// Integration steps used for spring-loaded synthesis when a caller has no preference.
pub const DEFAULT_SPRING_STEPS: usize = 2048;
/// Relative forward-verification tolerance for spring-loaded synthesis.
pub const SPRING_VERIFY_TOL: f64 = 1e-6;

/// Load hanging on the non-circular pulley's cable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CounterElement<T> {
    /// Dead weight `m·g`, constant tension.
    Weight { load: T },
    /// Secondary spring with tension `T0 + k2·s` after paying out `s` of cable.
    Spring { pretension: T, stiffness: T },
}

impl<T: Scalar> CounterElement<T> {
    pub fn weight(load: T) -> Result<Self> {
        if !(load.is_finite() && load > T::zero()) {
            return Err(Error::validation(format!("counter load must be positive, got {load}")));
        }
        Ok(Self::Weight { load })
    }

    pub fn spring(pretension: T, stiffness: T) -> Result<Self> {
        if !(pretension.is_finite() && pretension >= T::zero()) {
            return Err(Error::validation(format!(
                "counter pretension must be >= 0, got {pretension}"
            )));
        }
        if !(stiffness.is_finite() && stiffness >= T::zero()) {
            return Err(Error::validation(format!(
                "counter stiffness must be >= 0, got {stiffness}"
            )));
        }
        Ok(Self::Spring { pretension, stiffness })
    }

    /// Cable tension after `payout` metres have left the pulley.
    pub fn tension(&self, payout: T) -> T {
        match *self {
            Self::Weight { load } => load,
            Self::Spring { pretension, stiffness } => pretension + stiffness * payout,
        }
    }

    /// Work the cable tension does over a payout of `payout` from zero,
    /// `∫₀ˢ T ds`.
    pub fn energy(&self, payout: T) -> T {
        match *self {
            Self::Weight { load } => load * payout,
            Self::Spring { pretension, stiffness } => pretension * payout + T::lit(0.5) * stiffness * payout * payout,
        }
    }
}

/// A sampled non-circular pulley profile.
#[derive(Debug, Clone, PartialEq)]
pub struct PulleyProfile<T> {
    radius: T,
    samples: Vec<(T, T)>,
    slope: Option<T>,
    cum_payout: Vec<T>,
    cum_arc: Vec<T>,
    arc_deriv: Vec<T>,
}

impl<T: Scalar> PulleyProfile<T> {
    /// Builds a profile from `(θ rad, r m)` samples.
    ///
    /// The first angle must be zero, angles strictly increasing, radii finite
    /// and non-negative, and at least two samples present.
    pub fn from_samples(radius: T, samples: Vec<(T, T)>) -> Result<Self> {
        check_radius(radius)?;
        if samples.is_empty() {
            return Err(Error::validation("profile has no samples"));
        }
        if samples.len() < 2 {
            return Err(Error::validation("profile needs at least two samples"));
        }
        if samples[0].0 != T::zero() {
            return Err(Error::validation(format!(
                "profile must start at θ = 0, got {}",
                samples[0].0
            )));
        }
        for (i, &(theta, r)) in samples.iter().enumerate() {
            if !theta.is_finite() {
                return Err(Error::validation(format!("sample {i}: angle is not finite")));
            }
            if !(r.is_finite() && r >= T::zero()) {
                return Err(Error::validation(format!(
                    "sample {i}: radius {r} must be finite and >= 0"
                )));
            }
        }
        if let Some(i) = samples.windows(2).position(|w| w[1].0 <= w[0].0) {
            return Err(Error::validation(format!(
                "sample {}: angle not strictly increasing",
                i + 1
            )));
        }
        Ok(Self::assemble(radius, samples, None))
    }

    /// Samples `r = radius_fn(θ)` on a uniform grid of `n` points over `[0, theta_max]`.
    pub fn sampled<F>(radius: T, theta_max: T, n: usize, radius_fn: F) -> Result<Self>
    where
        F: Fn(T) -> T,
    {
        check_samples(n)?;
        check_theta_max(theta_max)?;
        let samples = uniform_grid(theta_max, n).map(|th| (th, radius_fn(th))).collect();
        Self::from_samples(radius, samples)
    }

    fn assemble(radius: T, samples: Vec<(T, T)>, slope: Option<T>) -> Self {
        let n = samples.len();
        let mut cum_payout = Vec::with_capacity(n);
        cum_payout.push(T::zero());
        for w in samples.windows(2) {
            let last = cum_payout[cum_payout.len() - 1];
            cum_payout.push(last + (w[0].1 + w[1].1) * T::lit(0.5) * (w[1].0 - w[0].0));
        }

        let arc_deriv: Vec<T> = (0..n)
            .map(|i| {
                let (a, b) = if i == 0 {
                    (0, 1)
                } else if i == n - 1 {
                    (n - 2, n - 1)
                } else {
                    (i - 1, i + 1)
                };
                (samples[b].1 - samples[a].1) / (samples[b].0 - samples[a].0)
            })
            .collect();

        let mut profile = Self {
            radius,
            samples,
            slope,
            cum_payout,
            cum_arc: Vec::new(),
            arc_deriv,
        };
        let mut cum_arc = Vec::with_capacity(n);
        cum_arc.push(T::zero());
        for i in 0..n - 1 {
            let last = cum_arc[cum_arc.len() - 1];
            cum_arc.push(last + profile.arc_segment(i, profile.samples[i + 1].0));
        }
        profile.cum_arc = cum_arc;
        profile
    }

    /// Circular-pulley radius `R`, m.
    pub fn radius(&self) -> T {
        self.radius
    }

    /// `(θ rad, r m)` samples.
    pub fn samples(&self) -> &[(T, T)] {
        &self.samples
    }

    pub fn theta_max(&self) -> T {
        self.samples[self.samples.len() - 1].0
    }

    /// Slope `a` of `r = aθ` when the profile was synthesized for a linear
    /// target and has not been truncated.
    pub fn slope(&self) -> Option<T> {
        self.slope
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Smallest and largest sampled radius.
    pub fn radius_range(&self) -> (T, T) {
        self.samples
            .iter()
            .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &(_, r)| {
                (lo.min(r), hi.max(r))
            })
    }

    fn check_theta(&self, theta: T) -> Result<T> {
        clamp_to_closed(theta, T::zero(), self.theta_max())
            .ok_or_else(|| Error::domain("pulley angle", theta.as_f64(), 0.0, self.theta_max().as_f64()))
    }

    /// Index `i` of the panel `[θᵢ, θᵢ₊₁]` containing `theta`.
    fn panel(&self, theta: T) -> usize {
        let i = self.samples.partition_point(|s| s.0 <= theta);
        i.clamp(1, self.samples.len() - 1) - 1
    }

    fn interp(&self, i: usize, theta: T) -> T {
        let (t0, r0) = self.samples[i];
        let (t1, r1) = self.samples[i + 1];
        if theta == t0 {
            return r0;
        }
        if theta == t1 {
            return r1;
        }
        r0 + (r1 - r0) * ((theta - t0) / (t1 - t0))
    }

    /// Interpolated radius at `theta`.
    pub fn radius_at(&self, theta: T) -> Result<T> {
        let theta = self.check_theta(theta)?;
        Ok(self.interp(self.panel(theta), theta))
    }

    /// Cable length released after rotating to `theta`, `∫₀^θ r dφ`.
    pub fn payout(&self, theta: T) -> Result<T> {
        let theta = self.check_theta(theta)?;
        Ok(self.payout_unchecked(theta))
    }

    fn payout_unchecked(&self, theta: T) -> T {
        let i = self.panel(theta);
        let t0 = self.samples[i].0;
        self.cum_payout[i] + (self.samples[i].1 + self.interp(i, theta)) * T::lit(0.5) * (theta - t0)
    }

    /// Length of the profile curve between `θ = 0` and `theta`,
    /// `∫ √(r² + (dr/dθ)²) dφ`, with `dr/dθ` from central differences on the
    /// sample grid.
    pub fn arc_length(&self, theta: T) -> Result<T> {
        let theta = self.check_theta(theta)?;
        let i = self.panel(theta);
        Ok(self.cum_arc[i] + self.arc_segment(i, theta))
    }

    fn arc_segment(&self, i: usize, theta_end: T) -> T {
        let (t0, r0) = self.samples[i];
        let (t1, r1) = self.samples[i + 1];
        if theta_end <= t0 {
            return T::zero();
        }
        let span = t1 - t0;
        let (d0, d1) = (self.arc_deriv[i], self.arc_deriv[i + 1]);
        span * affine_norm_integral((r0, d0), (r1 - r0, d1 - d0), (theta_end - t0) / span)
    }
}

/// `∫₀ʷ |p + q·s| ds` for 2-vectors, in closed form.
///
/// With `u = s + p·q/|q|²` and `h = |p × q|/|q|²` the integrand is
/// `|q|·√(u² + h²)`; the antiderivative difference is rearranged so that no
/// two large terms are subtracted.
fn affine_norm_integral<T: Scalar>(p: (T, T), q: (T, T), w: T) -> T {
    let half = T::lit(0.5);
    let qn = q.0.hypot(q.1);
    if qn == T::zero() {
        return p.0.hypot(p.1) * w;
    }
    let h = (p.0 * q.1 - p.1 * q.0).abs() / (qn * qn);
    let u0 = (p.0 * q.0 + p.1 * q.1) / (qn * qn);
    let u1 = u0 + w;
    let s0 = u0.hypot(h);
    let s1 = u1.hypot(h);
    let sum = s0 + s1;
    if sum == T::zero() {
        return T::zero();
    }
    let algebraic = w * (half * sum + (u0 + u1) * (u0 + u1) / (T::lit(2.0) * sum));
    let log_term = if h == T::zero() {
        T::zero()
    } else {
        // asinh(u1/h) − asinh(u0/h) = asinh(arg)
        let arg = if (u0 < T::zero()) == (u1 < T::zero()) && u0 != T::zero() {
            w * (u0 + u1) / (u1 * s0 + u0 * s1)
        } else {
            (u1 * s0 - u0 * s1) / (h * h)
        };
        h * h * arg.asinh()
    };
    qn * half * (algebraic + log_term)
}

fn check_radius<T: Scalar>(radius: T) -> Result<()> {
    if radius.is_finite() && radius > T::zero() {
        Ok(())
    } else {
        Err(Error::validation(format!(
            "circular pulley radius must be positive, got {radius}"
        )))
    }
}

fn check_samples(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::validation(format!("need at least 2 samples, got {n}")));
    }
    Ok(())
}

fn check_theta_max<T: Scalar>(theta_max: T) -> Result<()> {
    if theta_max.is_finite() && theta_max > T::zero() {
        Ok(())
    } else {
        Err(Error::validation(format!(
            "theta_max must be positive, got {theta_max}"
        )))
    }
}

fn uniform_grid<T: Scalar>(theta_max: T, n: usize) -> impl Iterator<Item = T> {
    let last = T::from_count(n - 1);
    (0..n).map(move |i| {
        if i == n - 1 {
            theta_max
        } else {
            theta_max * (T::from_count(i) / last)
        }
    })
}

/// Spring displacement `x = Rθ` needed to reach `theta`, checked against the
/// target's domain.
fn target_extent<T: Scalar>(target: &ForceCharacteristic<T>, radius: T, theta_max: T) -> Result<()> {
    let stroke = radius * theta_max;
    clamp_to_closed(stroke, T::zero(), target.x_max())
        .map(|_| ())
        .ok_or_else(|| Error::domain("pulley stroke R·θmax", stroke.as_f64(), 0.0, target.x_max().as_f64()))
}

/// `θ = x / R`.
pub fn angle_for_displacement<T: Scalar>(radius: T, x: T) -> Result<T> {
    check_radius(radius)?;
    if x.is_nan() || x < T::zero() {
        return Err(Error::domain("displacement", x.as_f64(), 0.0, f64::INFINITY));
    }
    Ok(x / radius)
}

/// `x = R θ`.
pub fn displacement_for_angle<T: Scalar>(radius: T, theta: T) -> Result<T> {
    check_radius(radius)?;
    if theta.is_nan() || theta < T::zero() {
        return Err(Error::domain("pulley angle", theta.as_f64(), 0.0, f64::INFINITY));
    }
    Ok(radius * theta)
}

fn radius_for<T: Scalar>(target_force: T, radius: T, tension: T, theta: T) -> Result<T> {
    let r = radius * target_force / tension;
    if r < T::zero() {
        return Err(Error::validation(format!(
            "target force {target_force} N at θ = {theta} is negative; a cable can only pull"
        )));
    }
    Ok(r)
}

/// Dead-weight synthesis over the whole target domain, `θmax = x_max / R`.
pub fn synthesize_weight_counter<T: Scalar>(
    target: &ForceCharacteristic<T>,
    radius: T,
    load: T,
    n_samples: usize,
) -> Result<PulleyProfile<T>> {
    check_radius(radius)?;
    synthesize_weight_counter_over(target, radius, load, n_samples, target.x_max() / radius)
}

/// Dead-weight synthesis over `[0, theta_max]`.
///
/// Torque balance `F(Rθ)·R = r(θ)·load` gives `r(θ) = R·F(Rθ)/load`. For a
/// linear target this is the spiral `r = aθ` with `a = kR²/load`.
pub fn synthesize_weight_counter_over<T: Scalar>(
    target: &ForceCharacteristic<T>,
    radius: T,
    load: T,
    n_samples: usize,
    theta_max: T,
) -> Result<PulleyProfile<T>> {
    check_radius(radius)?;
    let counter = CounterElement::weight(load)?;
    check_samples(n_samples)?;
    check_theta_max(theta_max)?;
    target_extent(target, radius, theta_max)?;

    let tension = counter.tension(T::zero());
    let samples = uniform_grid(theta_max, n_samples)
        .map(|theta| {
            let x = (radius * theta).min(target.x_max());
            Ok((theta, radius_for(target.eval(x), radius, tension, theta)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let slope = target.stiffness().map(|k| k * radius * radius / load);
    Ok(PulleyProfile::assemble(radius, samples, slope))
}

/// Spring-loaded synthesis over the whole target domain.
pub fn synthesize_spring_counter<T: Scalar>(
    target: &ForceCharacteristic<T>,
    radius: T,
    counter: &CounterElement<T>,
    n_steps: usize,
) -> Result<PulleyProfile<T>> {
    check_radius(radius)?;
    synthesize_spring_counter_over(target, radius, counter, n_steps, target.x_max() / radius)
}

/// Spring-loaded synthesis over `[0, theta_max]`.
///
/// The cable tension now grows with payout, so the balance
/// `r(θ)·(T0 + k2·s(θ)) = R·F(Rθ)` is coupled to `ds/dθ = r(θ)`. Eliminating
/// `r` leaves `ds/dθ = R·F(Rθ) / (T0 + k2·s)`, integrated from `s(0) = 0` by
/// fixed-step classical RK4. The returned profile has `n_steps + 1` samples and
/// is checked forward through [`realized_force`].
///
/// A dead-weight counter is accepted and reproduces
/// [`synthesize_weight_counter_over`] with `n_steps + 1` samples.
pub fn synthesize_spring_counter_over<T: Scalar>(
    target: &ForceCharacteristic<T>,
    radius: T,
    counter: &CounterElement<T>,
    n_steps: usize,
    theta_max: T,
) -> Result<PulleyProfile<T>> {
    check_radius(radius)?;
    if n_steps < 1 {
        return Err(Error::validation("spring synthesis needs at least one step"));
    }
    check_theta_max(theta_max)?;
    target_extent(target, radius, theta_max)?;

    let (pretension, k2) = match *counter {
        CounterElement::Weight { load } => (load, T::zero()),
        CounterElement::Spring { pretension, stiffness } => (pretension, stiffness),
    };
    let f0 = target.eval(T::zero());
    if pretension == T::zero() && f0 != T::zero() {
        return Err(Error::Singularity(format!(
            "zero pretension cannot balance the initial target force {f0} N"
        )));
    }

    let force = |theta: T| target.eval((radius * theta).min(target.x_max()));
    let tension = |s: T, theta: T| -> Result<T> {
        let t = pretension + k2 * s;
        if t > T::zero() {
            Ok(t)
        } else {
            Err(Error::Singularity(format!(
                "counter tension {t} N is not positive at θ = {theta}"
            )))
        }
    };
    let rate = |theta: T, s: T| -> Result<T> { Ok(radius * force(theta) / tension(s, theta)?) };

    let grid: Vec<T> = uniform_grid(theta_max, n_steps + 1).collect();
    let mut payouts = Vec::with_capacity(grid.len());
    let mut s = T::zero();
    payouts.push(s);
    let half = T::lit(0.5);
    let sixth = T::one() / T::lit(6.0);
    for w in grid.windows(2) {
        let (theta, h) = (w[0], w[1] - w[0]);
        let k1 = rate(theta, s)?;
        let k2r = rate(theta + h * half, s + h * half * k1)?;
        let k3 = rate(theta + h * half, s + h * half * k2r)?;
        let k4 = rate(w[1], s + h * k3)?;
        s = s + h * sixth * (k1 + T::lit(2.0) * (k2r + k3) + k4);
        payouts.push(s);
    }

    let samples = grid
        .iter()
        .zip(&payouts)
        .map(|(&theta, &s)| {
            let t = tension(s, theta)?;
            Ok((theta, radius_for(force(theta), radius, t, theta)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let slope = match (target.stiffness(), k2 == T::zero()) {
        (Some(k), true) => Some(k * radius * radius / pretension),
        _ => None,
    };
    let profile = PulleyProfile::assemble(radius, samples, slope);

    let check = verify(&profile, counter, target)?;
    if check.force_relative() > T::lit(SPRING_VERIFY_TOL) {
        return Err(Error::Numerical(format!(
            "spring-loaded profile misses the target by {} of peak force",
            check.force_relative()
        )));
    }
    Ok(profile)
}

/// Linear force the counter-loaded profile delivers at `theta`, `r(θ)·T/R`.
pub fn realized_force<T: Scalar>(profile: &PulleyProfile<T>, counter: &CounterElement<T>, theta: T) -> Result<T> {
    let theta = profile.check_theta(theta)?;
    Ok(realized_unchecked(profile, counter, theta))
}

fn realized_unchecked<T: Scalar>(profile: &PulleyProfile<T>, counter: &CounterElement<T>, theta: T) -> T {
    let i = profile.panel(theta);
    let r = profile.interp(i, theta);
    let tension = match counter {
        CounterElement::Weight { load } => *load,
        _ => counter.tension(profile.payout_unchecked(theta)),
    };
    r * tension / profile.radius
}

/// Clamps every radius into `[r_min, r_max]`, keeping the angle grid.
///
/// `r_max` may be infinite. The affine slope is dropped unless the clamp left
/// every sample unchanged.
pub fn truncate_profile<T: Scalar>(profile: &PulleyProfile<T>, r_min: T, r_max: T) -> Result<PulleyProfile<T>> {
    if !(r_min.is_finite() && r_min >= T::zero() && r_min < r_max) || r_max.is_nan() {
        return Err(Error::validation(format!(
            "truncation bounds must satisfy 0 <= r_min < r_max, got [{r_min}, {r_max}]"
        )));
    }
    let mut changed = false;
    let samples = profile
        .samples
        .iter()
        .map(|&(theta, r)| {
            let c = r.max(r_min).min(r_max);
            changed |= c != r;
            (theta, c)
        })
        .collect();
    let slope = if changed { None } else { profile.slope };
    Ok(PulleyProfile::assemble(profile.radius, samples, slope))
}

/// Departure from the balance condition at `theta`: target force at `Rθ`
/// minus the force realized by the pulley and counter.
pub fn balance_residual<T: Scalar>(
    profile: &PulleyProfile<T>,
    counter: &CounterElement<T>,
    target: &ForceCharacteristic<T>,
    theta: T,
) -> Result<T> {
    let realized = realized_force(profile, counter, theta)?;
    let f = target.force_at(profile.radius * theta)?;
    Ok(f - realized)
}

/// Worst-case forward errors of a profile against its target, evaluated on
/// the profile's sample grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verification<T> {
    /// `max |balance_residual|`, N.
    pub max_residual: T,
    /// `max |target force|`, N.
    pub peak_force: T,
    /// `max |counter energy − target stored energy|`, J.
    pub max_energy_error: T,
    /// `max |target stored energy|`, J.
    pub peak_energy: T,
}

impl<T: Scalar> Verification<T> {
    pub fn force_relative(&self) -> T {
        relative(self.max_residual, self.peak_force)
    }

    pub fn energy_relative(&self) -> T {
        relative(self.max_energy_error, self.peak_energy)
    }
}

fn relative<T: Scalar>(err: T, scale: T) -> T {
    if scale > T::zero() {
        err / scale
    } else {
        err
    }
}

/// Forward-checks `profile` against `target` at every sample angle.
pub fn verify<T: Scalar>(
    profile: &PulleyProfile<T>,
    counter: &CounterElement<T>,
    target: &ForceCharacteristic<T>,
) -> Result<Verification<T>> {
    target_extent(target, profile.radius, profile.theta_max())?;
    let mut out = Verification {
        max_residual: T::zero(),
        peak_force: T::zero(),
        max_energy_error: T::zero(),
        peak_energy: T::zero(),
    };
    for &(theta, _) in &profile.samples {
        let x = (profile.radius * theta).min(target.x_max());
        let f = target.eval(x);
        let residual = f - realized_unchecked(profile, counter, theta);
        let stored = target.stored_energy(x)?;
        let counter_energy = counter.energy(profile.payout_unchecked(theta));
        out.max_residual = out.max_residual.max(residual.abs());
        out.peak_force = out.peak_force.max(f.abs());
        out.max_energy_error = out.max_energy_error.max((counter_energy - stored).abs());
        out.peak_energy = out.peak_energy.max(stored.abs());
    }
    Ok(out)
}
