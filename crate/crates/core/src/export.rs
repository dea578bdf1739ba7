//! Text artifacts: profile, sweep and trace CSV files and SVG pulley outlines.
//!
//! Files use fabrication units (mm, degrees) while the models are SI. Every
//! real number is written with six decimals and a `.` separator, and lines
//! end in LF, so output is byte-for-byte reproducible.

use std::fmt::Write as _;

use crate::converter::SweepTable;
use crate::error::{Error, Result};
use crate::gripper::GraspTrace;
use crate::pulley::PulleyProfile;
use crate::scalar::Scalar;

pub const PROFILE_HEADER: &str = "theta_deg,r_mm";
pub const SWEEP_HEADER: &str = "u_mm,spring_force_n,counter_force_n,op_force_ideal_n,op_force_plus_n,op_force_minus_n";
pub const TRACE_HEADER: &str = "tick,phase,jaw_mm,grip_n,actuator_n,latch";

const M_TO_MM: f64 = 1000.0;

/// Fixed six-decimal rendering; negative zero prints as zero.
pub fn fixed6(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".to_owned()
    } else {
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgOptions {
    /// Pixels per millimetre.
    pub scale: f64,
    /// Stroke width in pixels.
    pub stroke_width: f64,
    /// Margin around the outline, mm.
    pub margin: f64,
    /// Close the outline with a chord from the last sample back to the first.
    pub close_curve: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self {
            scale: 10.0,
            stroke_width: 1.0,
            margin: 5.0,
            close_curve: false,
        }
    }
}

impl SvgOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::validation(format!(
                "SVG scale must be positive, got {}",
                self.scale
            )));
        }
        if !(self.margin.is_finite() && self.margin >= 0.0) {
            return Err(Error::validation(format!(
                "SVG margin must be >= 0, got {}",
                self.margin
            )));
        }
        if !(self.stroke_width.is_finite() && self.stroke_width > 0.0) {
            return Err(Error::validation(format!(
                "SVG stroke width must be positive, got {}",
                self.stroke_width
            )));
        }
        Ok(())
    }
}

/// Renders a profile outline as an SVG document.
pub fn profile_to_svg<T: Scalar>(profile: &PulleyProfile<T>, opts: &SvgOptions) -> Result<String> {
    samples_to_svg(profile.samples(), opts)
}

/// Renders `(θ rad, r m)` samples as an SVG document: one path through the
/// polar points in mm with the y axis pointing down, and a marker on the
/// rotation axis.
pub fn samples_to_svg<T: Scalar>(samples: &[(T, T)], opts: &SvgOptions) -> Result<String> {
    opts.validate()?;
    if samples.is_empty() {
        return Err(Error::validation("profile has no samples"));
    }
    let points: Vec<(f64, f64)> = samples
        .iter()
        .map(|&(theta, r)| {
            let (theta, r_mm) = (theta.as_f64(), r.as_f64() * M_TO_MM);
            (r_mm * theta.cos(), -(r_mm * theta.sin()))
        })
        .collect();
    if points.iter().any(|(x, y)| !(x.is_finite() && y.is_finite())) {
        return Err(Error::validation("profile produces non-finite coordinates"));
    }
    // The axis marker sits at the origin, so it is part of the bounds.
    let (min_x, max_x, min_y, max_y) = points.iter().fold((0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64), |b, &(x, y)| {
        (b.0.min(x), b.1.max(x), b.2.min(y), b.3.max(y))
    });
    let vb_x = min_x - opts.margin;
    let vb_y = min_y - opts.margin;
    let vb_w = max_x - min_x + 2.0 * opts.margin;
    let vb_h = max_y - min_y + 2.0 * opts.margin;
    let stroke_mm = opts.stroke_width / opts.scale;
    let marker_r = (0.5 * stroke_mm).max(0.5);

    let mut d = String::new();
    for (i, (x, y)) in points.iter().enumerate() {
        let cmd = if i == 0 { 'M' } else { 'L' };
        if i > 0 {
            d.push(' ');
        }
        let _ = write!(d, "{cmd}{},{}", fixed6(*x), fixed6(*y));
    }
    if opts.close_curve {
        d.push_str(" Z");
    }

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"{} {} {} {}\">",
        fixed6(vb_w * opts.scale),
        fixed6(vb_h * opts.scale),
        fixed6(vb_x),
        fixed6(vb_y),
        fixed6(vb_w),
        fixed6(vb_h)
    );
    let _ = writeln!(
        out,
        "  <path d=\"{d}\" fill=\"none\" stroke=\"black\" stroke-width=\"{}\"/>",
        fixed6(stroke_mm)
    );
    let _ = writeln!(
        out,
        "  <circle cx=\"0.000000\" cy=\"0.000000\" r=\"{}\" fill=\"red\"/>",
        fixed6(marker_r)
    );
    out.push_str("</svg>\n");
    Ok(out)
}

/// `theta_deg,r_mm` rows, one per sample.
pub fn profile_to_csv<T: Scalar>(profile: &PulleyProfile<T>) -> String {
    let mut out = String::with_capacity(24 * (profile.len() + 1));
    out.push_str(PROFILE_HEADER);
    out.push('\n');
    for &(theta, r) in profile.samples() {
        let _ = writeln!(
            out,
            "{},{}",
            fixed6(theta.as_f64().to_degrees()),
            fixed6(r.as_f64() * M_TO_MM)
        );
    }
    out
}

/// Parses profile CSV text into `(θ rad, r m)` samples.
///
/// Checks the header and that angles start at zero and strictly increase.
pub fn read_profile_samples<T: Scalar>(text: &str) -> Result<Vec<(T, T)>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)));
    match lines.next() {
        Some((_, h)) if h == PROFILE_HEADER => {}
        Some((line, h)) => {
            return Err(Error::Parse {
                line,
                message: format!("expected header `{PROFILE_HEADER}`, found `{h}`"),
            })
        }
        None => {
            return Err(Error::Parse {
                line: 1,
                message: format!("missing header `{PROFILE_HEADER}`"),
            })
        }
    }
    let mut samples: Vec<(T, T)> = Vec::new();
    for (line, raw) in lines {
        if raw.trim().is_empty() {
            return Err(Error::Parse {
                line,
                message: "blank line".to_owned(),
            });
        }
        let mut fields = raw.split(',');
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::Parse {
                line,
                message: format!("expected 2 fields, found `{raw}`"),
            });
        };
        let parse = |s: &str, what: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parse {
                    line,
                    message: format!("invalid {what} `{s}`"),
                })
        };
        let theta_deg = parse(a, "angle")?;
        let r_mm = parse(b, "radius")?;
        if r_mm < 0.0 {
            return Err(Error::Parse {
                line,
                message: format!("negative radius {r_mm}"),
            });
        }
        let theta = T::lit(theta_deg.to_radians());
        match samples.last() {
            None if theta_deg != 0.0 => {
                return Err(Error::Parse {
                    line,
                    message: format!("first angle must be 0, found {theta_deg}"),
                })
            }
            Some(&(prev, _)) if theta <= prev => {
                return Err(Error::Parse {
                    line,
                    message: format!("angle {theta_deg} does not increase"),
                })
            }
            _ => {}
        }
        samples.push((theta, T::lit(r_mm / M_TO_MM)));
    }
    if samples.is_empty() {
        return Err(Error::validation("profile CSV has no samples"));
    }
    Ok(samples)
}

/// Parses profile CSV text into a profile around a circular pulley of `radius` m.
pub fn read_profile_csv<T: Scalar>(text: &str, radius: T) -> Result<PulleyProfile<T>> {
    PulleyProfile::from_samples(radius, read_profile_samples(text)?)
}

pub fn sweep_to_csv<T: Scalar>(table: &SweepTable<T>) -> String {
    let mut out = String::new();
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for r in &table.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            fixed6(r.u.as_f64() * M_TO_MM),
            fixed6(r.spring_force.as_f64()),
            fixed6(r.counter_force.as_f64()),
            fixed6(r.operating_force_ideal.as_f64()),
            fixed6(r.operating_force_plus.as_f64()),
            fixed6(r.operating_force_minus.as_f64()),
        );
    }
    out
}

pub fn trace_to_csv<T: Scalar>(trace: &GraspTrace<T>) -> String {
    let mut out = String::new();
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for r in &trace.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.tick,
            r.phase.as_str(),
            fixed6(r.jaw_position.as_f64() * M_TO_MM),
            fixed6(r.grip_force.as_f64()),
            fixed6(r.actuator_force.as_f64()),
            u8::from(r.latch_engaged),
        );
    }
    out
}
