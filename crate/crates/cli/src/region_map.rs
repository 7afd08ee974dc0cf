//! Region labels over a `(tau, rho)` grid, as CSV and SVG.

use std::io::Write;
use std::str::FromStr;

use anyhow::{bail, Result};
use quatisom_core::{region_of, QuarticCoeffs, Region, Tolerance};

/// Grid values are rounded to this many decimals to absorb `lo + k h` drift.
const GRID_DECIMALS: i32 = 9;

/// Closed interval `lo:hi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
}

impl FromStr for Range {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once(':').ok_or_else(|| format!("expected `A:B`, got `{s}`"))?;
        let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
        let (lo, hi) = (parse(a)?, parse(b)?);
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(format!("invalid range `{s}`"));
        }
        Ok(Self { lo, hi })
    }
}

impl Range {
    fn points(&self, step: f64) -> Vec<f64> {
        let n = ((self.hi - self.lo) / step + 1e-9).floor() as usize;
        let scale = 10f64.powi(GRID_DECIMALS);
        (0..=n).map(|k| ((self.lo + k as f64 * step) * scale).round() / scale + 0.0).collect()
    }
}

#[derive(Clone, Debug)]
pub struct Grid {
    pub tau: Range,
    pub rho: Range,
    pub step: f64,
}

impl Grid {
    pub fn new(tau: Range, rho: Range, step: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            bail!("step must be positive, got {step}");
        }
        Ok(Self { tau, rho, step })
    }

    /// Grid points, `tau` outer and `rho` inner, with their regions.
    pub fn cells(&self, tol: Tolerance) -> Vec<(f64, f64, Region)> {
        let rhos = self.rho.points(self.step);
        self.tau
            .points(self.step)
            .into_iter()
            .flat_map(|t| rhos.iter().map(move |&r| (t, r)))
            .map(|(t, r)| (t, r, region_of(&QuarticCoeffs::new(t, r), tol)))
            .collect()
    }
}

/// The verdict a region admits; both candidates on the open arc.
pub fn verdict_label(region: Region) -> &'static str {
    match region {
        Region::ParabolaArc => "elliptic_or_parabolic",
        Region::Unrealizable => "",
        r => r.forced_verdict().map_or("", |v| v.as_str()),
    }
}

pub fn write_csv(out: &mut dyn Write, grid: &Grid, tol: Tolerance) -> Result<()> {
    writeln!(out, "tau,rho,region,verdict_if_realizable")?;
    for (t, r, region) in grid.cells(tol) {
        writeln!(out, "{t},{r},{region},{}", verdict_label(region))?;
    }
    Ok(())
}

fn fill(region: Region) -> &'static str {
    match region {
        Region::R1Interior => "#9ecae1",
        Region::R1LineBoundary => "#3182bd",
        Region::ParabolaArc => "#e6550d",
        Region::TangencyPoint => "#000000",
        Region::ParabolaOuter => "#a63603",
        Region::R2Interior => "#fdd0a2",
        Region::Unrealizable => "#f0f0f0",
    }
}

const WIDTH: f64 = 600.0;
const HEIGHT: f64 = 600.0;
const CURVE_SAMPLES: usize = 400;

pub fn write_svg(out: &mut dyn Write, grid: &Grid, tol: Tolerance) -> Result<()> {
    let (t0, t1) = (grid.tau.lo - grid.step / 2.0, grid.tau.hi + grid.step / 2.0);
    let (r0, r1) = (grid.rho.lo - grid.step / 2.0, grid.rho.hi + grid.step / 2.0);
    let x = |t: f64| (t - t0) / (t1 - t0) * WIDTH;
    let y = |r: f64| (r1 - r) / (r1 - r0) * HEIGHT;
    let (cw, ch) = (grid.step / (t1 - t0) * WIDTH, grid.step / (r1 - r0) * HEIGHT);

    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )?;
    writeln!(out, r#"<g stroke="none">"#)?;
    for (t, r, region) in grid.cells(tol) {
        writeln!(
            out,
            r#"<rect x="{:.3}" y="{:.3}" width="{cw:.3}" height="{ch:.3}" fill="{}"><title>{t},{r} {region}</title></rect>"#,
            x(t) - cw / 2.0,
            y(r) - ch / 2.0,
            fill(region)
        )?;
    }
    writeln!(out, "</g>")?;

    let curve = |f: &dyn Fn(f64) -> f64| {
        (0..=CURVE_SAMPLES)
            .map(|k| {
                let t = t0 + (t1 - t0) * k as f64 / CURVE_SAMPLES as f64;
                format!("{:.3},{:.3}", x(t), y(f(t)))
            })
            .collect::<Vec<_>>()
            .join(" ")
    };
    writeln!(out, r#"<clipPath id="plot"><rect width="{WIDTH}" height="{HEIGHT}"/></clipPath>"#)?;
    writeln!(out, r#"<g clip-path="url(#plot)" fill="none" stroke-width="1.5">"#)?;
    writeln!(out, r##"<polyline stroke="#08519c" points="{}"/>"##, curve(&|t| 4.0 * t.abs() - 2.0))?;
    writeln!(out, r##"<polyline stroke="#a50f15" points="{}"/>"##, curve(&|t| t * t + 2.0))?;
    for t in [-2.0, 2.0] {
        writeln!(out, r#"<circle cx="{:.3}" cy="{:.3}" r="4" fill="black"/>"#, x(t), y(6.0))?;
    }
    writeln!(out, "</g>")?;
    writeln!(out, "</svg>")?;
    Ok(())
}
