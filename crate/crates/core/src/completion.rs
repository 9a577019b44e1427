//! Gaussian-smoothed sign integrals over negative 2-planes and partial
//! sums of the completed series.
//!
//! The radial integral is analytic (an erf closed form), so only the
//! angular integral is quadrature; sectors are split at the two sign
//! kernel lines, leaving a smooth integrand per panel. When the whole
//! configuration lies in one negative plane the summand weight collapses
//! to an exact integer combination of sector masses, which avoids the
//! catastrophic cancellation the per-pair route suffers at very negative
//! norms.

use crate::error::{Error, Result};
use crate::incidence::{check_all, ConeConfig};
use crate::matrix::RatVec;
use crate::quadform::{build_majorant, Lattice, QuadraticSpace};
use crate::rat::{to_f64, Rat};
use crate::signwalk::{reference_weight, ReferenceWeight};
use crate::theta::enumerate_lattice_points;
use num::complex::Complex64;
use num::{Signed, Zero};
use statrs::function::erf::erf;
use std::f64::consts::PI;

/// Frame of a negative definite plane spanned by two configuration
/// vectors: (f_i, f_j) = -delta_ij under the ambient form, so the
/// restricted positive form is Euclidean in frame coordinates.
pub struct PlaneFrame {
    pub c: RatVec,
    pub cp: RatVec,
    pub f1: Vec<f64>,
    pub f2: Vec<f64>,
    /// Frame coordinates of the span vectors under the positive form.
    pub c_coords: [f64; 2],
    pub cp_coords: [f64; 2],
    gram_f: Vec<Vec<f64>>,
}

impl PlaneFrame {
    /// Validates exactly (rationally) that the span is 2-dimensional and
    /// negative definite, then builds the floating-point frame.
    pub fn new(space: &QuadraticSpace, c: &[Rat], cp: &[Rat]) -> Result<Self> {
        let g11 = space.inner(c, c)?;
        let g12 = space.inner(c, cp)?;
        let g22 = space.inner(cp, cp)?;
        let det = &g11 * &g22 - &g12 * &g12;
        if !g11.is_negative() || !det.is_positive() {
            return Err(Error::DegeneratePlane(format!(
                "span is not a negative definite plane: norms {}, {}, det {}",
                crate::rat::rat_to_string(&g11),
                crate::rat::rat_to_string(&g22),
                crate::rat::rat_to_string(&det)
            )));
        }
        let gram_f: Vec<Vec<f64>> = (0..space.dim())
            .map(|i| space.gram().row(i).iter().map(to_f64).collect())
            .collect();
        // Gram-Schmidt under the positive form -( , ) restricted to the span.
        let p11 = -to_f64(&g11);
        let p12 = -to_f64(&g12);
        let p22 = -to_f64(&g22);
        let cf: Vec<f64> = c.iter().map(to_f64).collect();
        let cpf: Vec<f64> = cp.iter().map(to_f64).collect();
        let s1 = p11.sqrt();
        let f1: Vec<f64> = cf.iter().map(|v| v / s1).collect();
        let proj = p12 / p11;
        let resid: Vec<f64> = cpf.iter().zip(&cf).map(|(a, b)| a - proj * b).collect();
        let rnorm = (p22 - p12 * p12 / p11).sqrt();
        let f2: Vec<f64> = resid.iter().map(|v| v / rnorm).collect();
        Ok(PlaneFrame {
            c: c.to_vec(),
            cp: cp.to_vec(),
            c_coords: [s1, 0.0],
            cp_coords: [p12 / s1, rnorm],
            f1,
            f2,
            gram_f,
        })
    }

    fn inner_f(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut s = 0.0;
        for (row, &xi) in self.gram_f.iter().zip(x) {
            s += xi * row.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
        }
        s
    }

    /// Frame coordinates (u1, u2) of the orthogonal projection of x onto
    /// the plane: pr(x) = u1 f1 + u2 f2 with u_i = -(x, f_i).
    pub fn project(&self, x: &[f64]) -> [f64; 2] {
        [-self.inner_f(x, &self.f1), -self.inner_f(x, &self.f2)]
    }

    pub fn project_rat(&self, x: &[Rat]) -> [f64; 2] {
        let xf: Vec<f64> = x.iter().map(to_f64).collect();
        self.project(&xf)
    }

    /// Largest pairing of the projection residual with the frame; zero up
    /// to rounding for a correct projection.
    pub fn projection_residual(&self, x: &[f64]) -> f64 {
        let [u1, u2] = self.project(x);
        let resid: Vec<f64> = x
            .iter()
            .zip(self.f1.iter().zip(&self.f2))
            .map(|(&v, (&a, &b))| v - u1 * a - u2 * b)
            .collect();
        self.inner_f(&resid, &self.f1)
            .abs()
            .max(self.inner_f(&resid, &self.f2).abs())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct E2Options {
    pub tolerance: f64,
    pub max_panels: usize,
}

impl Default for E2Options {
    fn default() -> Self {
        E2Options { tolerance: 1e-9, max_panels: 4096 }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct E2Value {
    pub value: f64,
    pub error_estimate: f64,
}

/// Radial part of the translated Gaussian over the ray at angle phi,
/// center at polar (rho, psi):
/// e^{-pi rho^2}/(2 pi) + (a/2) e^{-pi rho^2 sin^2 d} (1 + erf(sqrt(pi) a))
/// with d = phi - psi and a = rho cos d. Its full-circle integral is 1.
fn radial_mass(phi: f64, rho: f64, psi: f64) -> f64 {
    if rho == 0.0 {
        return 1.0 / (2.0 * PI);
    }
    let d = phi - psi;
    let a = rho * d.cos();
    let s = rho * d.sin();
    (-PI * rho * rho).exp() / (2.0 * PI)
        + 0.5 * a * (-PI * s * s).exp() * (1.0 + erf(PI.sqrt() * a))
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and P_{n-1}(x).
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * {
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            dp * dp
        });
    }
    (nodes, weights)
}

const GL_ORDER: usize = 24;

/// Integral of the radial mass over [phi0, phi1] with the given panel
/// count; the integrand is smooth there.
fn arc_mass(phi0: f64, phi1: f64, rho: f64, psi: f64, panels: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(GL_ORDER);
    let mut total = 0.0;
    let h = (phi1 - phi0) / panels as f64;
    for p in 0..panels {
        let a = phi0 + p as f64 * h;
        let mid = a + h / 2.0;
        let half = h / 2.0;
        for (x, w) in nodes.iter().zip(&weights) {
            total += w * half * radial_mass(mid + half * x, rho, psi);
        }
    }
    total
}

/// Gaussian mass of the angular sector [phi0, phi1] for the unit-scale
/// Gaussian centered at `p` (frame coordinates), with panel escalation
/// until the doubling difference meets the tolerance.
pub fn sector_mass(p: [f64; 2], phi0: f64, phi1: f64, opts: &E2Options) -> Result<E2Value> {
    let rho = (p[0] * p[0] + p[1] * p[1]).sqrt();
    let psi = p[1].atan2(p[0]);
    let mut panels = (4 + rho.ceil() as usize).max(4);
    let mut value = arc_mass(phi0, phi1, rho, psi, panels);
    loop {
        let refined = arc_mass(phi0, phi1, rho, psi, panels * 2);
        let err = (refined - value).abs();
        if err <= opts.tolerance {
            return Ok(E2Value { value: refined, error_estimate: err });
        }
        panels *= 2;
        value = refined;
        if panels > opts.max_panels {
            return Err(Error::Quadrature(format!(
                "tolerance {} unreachable at the panel cap, residual {}",
                opts.tolerance, err
            )));
        }
    }
}

/// Boundary angles of the sign sectors: for each listed plane vector,
/// the kernel line of y -> y . v contributes two opposite angles.
fn sector_boundaries(vs: &[[f64; 2]]) -> Vec<f64> {
    let mut angles = Vec::with_capacity(2 * vs.len());
    for v in vs {
        // Kernel direction of y . v, i.e. the perpendicular (-v2, v1).
        let a = v[0].atan2(-v[1]).rem_euclid(2.0 * PI);
        angles.push(a);
        angles.push((a + PI).rem_euclid(2.0 * PI));
    }
    angles.sort_by(|x, y| x.partial_cmp(y).unwrap());
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
    angles
}

/// The smoothed sign product: integral over the plane of the unit
/// Gaussian centered at the projection of x, times sgn(y, C) sgn(y, C').
pub fn e2(frame: &PlaneFrame, x: &[Rat], opts: &E2Options) -> Result<E2Value> {
    let p = frame.project_rat(x);
    e2_at_projection(frame, p, opts)
}

pub fn e2_at_projection(frame: &PlaneFrame, p: [f64; 2], opts: &E2Options) -> Result<E2Value> {
    let bounds = sector_boundaries(&[frame.c_coords, frame.cp_coords]);
    let mut value = 0.0;
    let mut err = 0.0;
    let k = bounds.len();
    for i in 0..k {
        let phi0 = bounds[i];
        let phi1 = if i + 1 < k { bounds[i + 1] } else { bounds[0] + 2.0 * PI };
        let mid = (phi0 + phi1) / 2.0;
        let d = [mid.cos(), mid.sin()];
        // sgn(y, C) = -sgn(y . c) in frame coordinates; the two minus
        // signs cancel in the product.
        let s = (d[0] * frame.c_coords[0] + d[1] * frame.c_coords[1]).signum()
            * (d[0] * frame.cp_coords[0] + d[1] * frame.cp_coords[1]).signum();
        let m = sector_mass(p, phi0, phi1, opts)?;
        value += s * m.value;
        err += m.error_estimate;
    }
    Ok(E2Value { value, error_estimate: err })
}

/// Calibration: the same quadrature with the sign product replaced by
/// the constant 1; exact value 1.
pub fn e2_normalization(frame: &PlaneFrame, x: &[Rat], opts: &E2Options) -> Result<E2Value> {
    let p = frame.project_rat(x);
    let bounds = sector_boundaries(&[frame.c_coords, frame.cp_coords]);
    let mut value = 0.0;
    let mut err = 0.0;
    let k = bounds.len();
    for i in 0..k {
        let phi0 = bounds[i];
        let phi1 = if i + 1 < k { bounds[i + 1] } else { bounds[0] + 2.0 * PI };
        let m = sector_mass(p, phi0, phi1, opts)?;
        value += m.value;
        err += m.error_estimate;
    }
    Ok(E2Value { value, error_estimate: err })
}

/// Centered closed form 1 - 2 phi / pi, phi the angle between the span
/// vectors under the restricted positive form.
pub fn e2_centered_closed_form(frame: &PlaneFrame) -> f64 {
    let [c1, c2] = frame.c_coords;
    let [d1, d2] = frame.cp_coords;
    let dot = c1 * d1 + c2 * d2;
    let nn = (c1 * c1 + c2 * c2).sqrt() * (d1 * d1 + d2 * d2).sqrt();
    let phi = (dot / nn).clamp(-1.0, 1.0).acos();
    1.0 - 2.0 * phi / PI
}

/// When every configuration vector lies in a single negative definite
/// plane, returns a frame for it and the frame coordinates of each
/// vector; the per-pair integrals then share one plane.
fn coplanar_frame(config: &ConeConfig) -> Result<Option<(PlaneFrame, Vec<[f64; 2]>)>> {
    let vectors = config.vectors();
    let dim = config.dim();
    // Exact rank over the rationals: reduced basis rows with pivot columns.
    let mut basis_rows: Vec<(usize, RatVec)> = Vec::new();
    let mut basis_idx: Vec<usize> = Vec::new();
    for (orig, v) in vectors.iter().enumerate() {
        let mut reduced = v.clone();
        for (pc, row) in &basis_rows {
            if !reduced[*pc].is_zero() {
                let f = &reduced[*pc] / &row[*pc];
                for (r, bv) in reduced.iter_mut().zip(row) {
                    *r -= &f * bv;
                }
            }
        }
        if let Some(pc) = (0..dim).find(|&j| !reduced[j].is_zero()) {
            basis_rows.push((pc, reduced));
            basis_idx.push(orig);
            if basis_rows.len() > 2 {
                return Ok(None);
            }
        }
    }
    if basis_rows.len() != 2 {
        return Ok(None);
    }
    let frame = match PlaneFrame::new(
        config.space(),
        &vectors[basis_idx[0]],
        &vectors[basis_idx[1]],
    ) {
        Ok(f) => f,
        Err(Error::DegeneratePlane(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let coords: Vec<[f64; 2]> = vectors
        .iter()
        .map(|v| {
            let vf: Vec<f64> = v.iter().map(to_f64).collect();
            // Plane members have coordinates u_i = P(f_i, v) = -(f_i, v).
            [-frame.inner_f(&vf, &frame.f1), -frame.inner_f(&vf, &frame.f2)]
        })
        .collect();
    Ok(Some((frame, coords)))
}

#[derive(Clone, Debug)]
pub struct ShellDiag {
    pub majorant_norm: f64,
    pub term_norm: f64,
}

#[derive(Clone, Debug)]
pub struct CompletedPartial {
    /// Partial sum over the majorant ball of radius B.
    pub value: Complex64,
    /// Partial sum over the doubled ball.
    pub value_doubled: Complex64,
    /// |doubled - base| relative to the worst-case size of the added
    /// shell; small values indicate the partial sum has stabilized.
    pub doubling_ratio: f64,
    pub per_shell: Vec<ShellDiag>,
    pub coplanar: bool,
}

/// Partial sums of the completed series: the summand weight is
/// -w_C + sum over consecutive pairs of the smoothed sign product at
/// sqrt(2) x, against q^{(x,x)/2}. The origin is included; its weight
/// uses the centered integrals.
pub fn completed_theta_partial(
    config: &ConeConfig,
    lattice: &Lattice,
    u: f64,
    v: f64,
    b: &Rat,
    opts: &E2Options,
) -> Result<CompletedPartial> {
    if v <= 0.0 {
        return Err(Error::Precondition("evaluation needs v > 0".into()));
    }
    if !check_all(config).overall {
        return Err(Error::Precondition(
            "completed series requires a configuration passing the incidence check".into(),
        ));
    }
    let reference = reference_weight(config)?;
    let majorant = build_majorant(&lattice.ambient)?;
    let b2 = b * crate::rat::rat_int(2);
    let points = enumerate_lattice_points(lattice, &majorant, &b2)?;

    let n = config.len();
    let mut frames: Vec<PlaneFrame> = Vec::new();
    let mut sector_data: Option<(PlaneFrame, Vec<f64>, Vec<i64>)> = None;
    match coplanar_frame(config)? {
        Some((frame, coords)) => {
            // One plane: the pair integrals sum to the Gaussian average
            // of the in-plane weight, an exact integer per sector.
            let bounds = sector_boundaries(&coords);
            let k = bounds.len();
            let mut sector_w = Vec::with_capacity(k);
            for i in 0..k {
                let phi0 = bounds[i];
                let phi1 = if i + 1 < k { bounds[i + 1] } else { bounds[0] + 2.0 * PI };
                let mid = (phi0 + phi1) / 2.0;
                let d = [mid.cos(), mid.sin()];
                let w: i64 = (0..n)
                    .map(|j| {
                        let sj = (d[0] * coords[j][0] + d[1] * coords[j][1]).signum();
                        let sjn = (d[0] * coords[(j + 1) % n][0]
                            + d[1] * coords[(j + 1) % n][1])
                            .signum();
                        (sj * sjn) as i64
                    })
                    .sum();
                sector_w.push(w);
            }
            sector_data = Some((frame, bounds, sector_w));
        }
        None => {
            for j in 0..n {
                frames.push(PlaneFrame::new(
                    config.space(),
                    &config.vectors()[j],
                    &config.vectors()[(j + 1) % n],
                )?);
            }
        }
    }

    let sqrt2 = 2.0f64.sqrt();
    let weight_of = |x: &RatVec| -> Result<f64> {
        match &sector_data {
            Some((frame, bounds, sector_w)) => {
                // weight = sum over sectors (w_sector - w_C) * mass; all
                // equal sector weights give an exact zero.
                if sector_w.iter().all(|&w| w == reference.w_c) {
                    return Ok(0.0);
                }
                let mut p = frame.project_rat(x);
                p[0] *= sqrt2;
                p[1] *= sqrt2;
                let mut total = 0.0;
                let k = bounds.len();
                for i in 0..k {
                    let phi0 = bounds[i];
                    let phi1 =
                        if i + 1 < k { bounds[i + 1] } else { bounds[0] + 2.0 * PI };
                    let dw = (sector_w[i] - reference.w_c) as f64;
                    if dw != 0.0 {
                        total += dw * sector_mass(p, phi0, phi1, opts)?.value;
                    }
                }
                Ok(total)
            }
            None => {
                let mut total = -(reference.w_c as f64);
                for frame in &frames {
                    let mut p = frame.project_rat(x);
                    p[0] *= sqrt2;
                    p[1] *= sqrt2;
                    total += e2_at_projection(frame, p, opts)?.value;
                }
                Ok(total)
            }
        }
    };

    let mut base = Complex64::new(0.0, 0.0);
    let mut doubled = Complex64::new(0.0, 0.0);
    let mut per_shell: Vec<ShellDiag> = Vec::new();
    let mut shell_scale = 0.0;
    for pt in &points {
        let w = weight_of(&pt.x)?;
        let m = to_f64(&pt.norm) / 2.0;
        let r = (-2.0 * PI * v * m).exp();
        let ph = 2.0 * PI * u * m;
        let term = Complex64::new(r * ph.cos(), r * ph.sin()) * w;
        doubled += term;
        if pt.majorant_norm <= *b {
            base += term;
        } else {
            shell_scale += 2.0 * n as f64 * r;
        }
        let mj = to_f64(&pt.majorant_norm);
        match per_shell.iter_mut().find(|s| (s.majorant_norm - mj).abs() < 1e-12) {
            Some(s) => s.term_norm += term.norm(),
            None => per_shell.push(ShellDiag { majorant_norm: mj, term_norm: term.norm() }),
        }
    }
    per_shell.sort_by(|a, b| a.majorant_norm.partial_cmp(&b.majorant_norm).unwrap());
    let diff = (doubled - base).norm();
    let doubling_ratio = if shell_scale > 0.0 { diff / shell_scale } else { 0.0 };
    Ok(CompletedPartial {
        value: base,
        value_doubled: doubled,
        doubling_ratio,
        per_shell,
        coplanar: sector_data.is_some(),
    })
}

/// Summand weight of the completed series at a single point, via the
/// per-pair route. Used for asymptotic checks against the discrete
/// weight deep inside a regular cone.
pub fn completed_weight(
    config: &ConeConfig,
    reference: &ReferenceWeight,
    x: &[Rat],
    opts: &E2Options,
) -> Result<f64> {
    let n = config.len();
    let sqrt2 = 2.0f64.sqrt();
    let mut total = -(reference.w_c as f64);
    for j in 0..n {
        let frame = PlaneFrame::new(
            config.space(),
            &config.vectors()[j],
            &config.vectors()[(j + 1) % n],
        )?;
        let mut p = frame.project_rat(x);
        p[0] *= sqrt2;
        p[1] *= sqrt2;
        total += e2_at_projection(&frame, p, opts)?.value;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::fixtures::{space_112, triple_valid};
    use crate::matrix::int_vec;
    use crate::rat::{rat, rat_int};
    use crate::signwalk::phi as phi_weight;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn frame_at(cp: Vec<Rat>) -> PlaneFrame {
        let s = space_112();
        PlaneFrame::new(&s, &int_vec(&[1, 0, 0]), &cp).unwrap()
    }

    #[test]
    fn projection_on_coordinate_plane() {
        let f = frame_at(int_vec(&[0, 1, 0]));
        let p = f.project(&[2.0, 3.0, 5.0]);
        assert!((p[0] - 2.0).abs() < 1e-12 && (p[1] - 3.0).abs() < 1e-12);
        let o = f.project(&[0.0, 0.0, 7.0]);
        assert!(o[0].abs() < 1e-12 && o[1].abs() < 1e-12);
    }

    #[test]
    fn projection_residual_orthogonal() {
        let f = frame_at(vec![rat(1, 3), rat_int(1), rat(1, 7)]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-5.0..5.0)).collect();
            assert!(f.projection_residual(&x) < 1e-12);
        }
    }

    #[test]
    fn degenerate_plane_rejected() {
        let s = space_112();
        // Null vector against an orthogonal negative one: det = 0.
        assert!(matches!(
            PlaneFrame::new(&s, &int_vec(&[1, 0, 1]), &int_vec(&[0, 1, 0])),
            Err(Error::DegeneratePlane(_))
        ));
        // Dependent vectors.
        assert!(PlaneFrame::new(&s, &int_vec(&[1, 0, 0]), &int_vec(&[-2, 0, 0])).is_err());
    }

    #[test]
    fn centered_values_match_closed_form() {
        let opts = E2Options::default();
        // Rational directions near pi/6, pi/4, pi/2, 2pi/3; the closed
        // form uses the exact angle of the chosen vectors, so agreement
        // tests the quadrature, not the approximation of the angle.
        let dirs = [
            vec![rat(866025, 1000000), rat(500000, 1000000), rat_int(0)],
            vec![rat(707107, 1000000), rat(707107, 1000000), rat_int(0)],
            vec![rat_int(0), rat_int(1), rat_int(0)],
            vec![rat(-500000, 1000000), rat(866025, 1000000), rat_int(0)],
        ];
        for d in dirs {
            let f = frame_at(d);
            let got = e2(&f, &int_vec(&[0, 0, 0]), &opts).unwrap();
            let want = e2_centered_closed_form(&f);
            assert!((got.value - want).abs() < 1e-6, "got {} want {}", got.value, want);
        }
        // Orthogonal pair: exactly zero by symmetry.
        let f = frame_at(int_vec(&[0, 1, 0]));
        let v = e2(&f, &int_vec(&[0, 0, 0]), &opts).unwrap().value;
        assert!(v.abs() < 1e-10);
    }

    #[test]
    fn bounded_and_symmetric() {
        let s = space_112();
        let opts = E2Options::default();
        let f = PlaneFrame::new(&s, &int_vec(&[1, 0, 0]), &vec![rat(1, 2), rat_int(1), rat_int(0)])
            .unwrap();
        let g = PlaneFrame::new(&s, &vec![rat(1, 2), rat_int(1), rat_int(0)], &int_vec(&[1, 0, 0]))
            .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..300 {
            let x: Vec<Rat> =
                (0..3).map(|_| rat(rng.gen_range(-40..=40), rng.gen_range(1..=8))).collect();
            let a = e2(&f, &x, &opts).unwrap().value;
            let b = e2(&g, &x, &opts).unwrap().value;
            assert!(a.abs() <= 1.0 + 1e-9);
            assert!((a - b).abs() < 1e-9, "asymmetry {a} vs {b}");
        }
    }

    #[test]
    fn rescaling_span_vectors_is_invariant() {
        let s = space_112();
        let opts = E2Options::default();
        let f = frame_at(vec![rat(1, 2), rat_int(1), rat_int(0)]);
        let scaled = PlaneFrame::new(
            &s,
            &vec![rat(7, 2), rat_int(0), rat_int(0)],
            &vec![rat(3, 2), rat_int(3), rat_int(0)],
        )
        .unwrap();
        let x = vec![rat(5, 3), rat(-2, 7), rat_int(1)];
        let a = e2(&f, &x, &opts).unwrap().value;
        let b = e2(&scaled, &x, &opts).unwrap().value;
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn normalization_is_one() {
        let opts = E2Options::default();
        let f = frame_at(vec![rat(1, 2), rat_int(1), rat_int(0)]);
        for x in [int_vec(&[0, 0, 0]), int_vec(&[3, -2, 1]), int_vec(&[-7, 5, 0])] {
            let n = e2_normalization(&f, &x, &opts).unwrap().value;
            assert!((n - 1.0).abs() < 1e-6, "normalization {n}");
        }
    }

    #[test]
    fn asymptotic_sign_product() {
        let c = triple_valid();
        let opts = E2Options::default();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            // Deep regular points in the negative plane.
            let a = rat_int(rng.gen_range(6..=12) * if rng.gen_bool(0.5) { 1 } else { -1 });
            let b = rat_int(rng.gen_range(6..=12) * if rng.gen_bool(0.5) { 1 } else { -1 });
            let x = vec![a, b, rat_int(0)];
            if !crate::signwalk::is_regular(&c, &x) {
                continue;
            }
            for j in 0..3 {
                let f = PlaneFrame::new(
                    &space_112(),
                    &c.vectors()[j],
                    &c.vectors()[(j + 1) % 3],
                )
                .unwrap();
                let p = f.project_rat(&x);
                if (p[0] * p[0] + p[1] * p[1]).sqrt() < 5.0 {
                    continue;
                }
                // The error term decays in the distance to the two sign
                // walls, not the radius, so stay well clear of both.
                let wall_dist = |c: &[f64; 2]| {
                    (p[0] * c[0] + p[1] * c[1]).abs() / (c[0] * c[0] + c[1] * c[1]).sqrt()
                };
                if wall_dist(&f.c_coords) < 2.0 || wall_dist(&f.cp_coords) < 2.0 {
                    continue;
                }
                let got = e2(&f, &x, &opts).unwrap().value;
                let sp = (crate::rat::sign(&c.pairing(&x, j))
                    * crate::rat::sign(&c.pairing(&x, j + 1))) as f64;
                assert!((got - sp).abs() < 1e-3, "e2 {got} vs sign product {sp}");
            }
        }
    }

    #[test]
    fn completed_weight_approaches_discrete_weight() {
        let c = triple_valid();
        let r = reference_weight(&c).unwrap();
        let opts = E2Options::default();
        let x = int_vec(&[10, 4, 0]);
        let w = completed_weight(&c, &r, &x, &opts).unwrap();
        let phi = phi_weight(&c, &x, Some(&r)).unwrap() as f64;
        assert!((w - phi).abs() < 1e-3);
    }

    #[test]
    fn completed_partial_coplanar_vanishes() {
        let c = triple_valid();
        let lat = Lattice::standard(space_112(), int_vec(&[0, 0, 0])).unwrap();
        let opts = E2Options::default();
        let out =
            completed_theta_partial(&c, &lat, 0.0, 1.0, &rat_int(4), &opts).unwrap();
        assert!(out.coplanar);
        // Every in-plane sector carries the reference weight, so the
        // completed summand weight is identically zero.
        assert_eq!(out.value, Complex64::new(0.0, 0.0));
        assert_eq!(out.value_doubled, Complex64::new(0.0, 0.0));
        assert!(out.doubling_ratio < 0.5);
        assert!(!out.per_shell.is_empty());
    }

    #[test]
    fn completed_partial_generic_path_runs() {
        let s = space_112();
        let c = crate::incidence::random_valid_config(
            &s,
            3,
            crate::incidence::GenMode::Perturbed { scale: rat(1, 60) },
            7,
        )
        .unwrap();
        let lat = Lattice::standard(s, int_vec(&[0, 0, 0])).unwrap();
        let opts = E2Options::default();
        let out = completed_theta_partial(&c, &lat, 0.0, 2.0, &rat_int(2), &opts).unwrap();
        assert!(!out.coplanar);
        assert!(out.value.norm().is_finite());
        assert!(out.doubling_ratio.is_finite());
    }

    #[test]
    fn completed_partial_refuses_invalid() {
        let b = crate::incidence::fixtures::triple_invalid();
        let lat = Lattice::standard(space_112(), int_vec(&[0, 0, 0])).unwrap();
        let out =
            completed_theta_partial(&b, &lat, 0.0, 1.0, &rat_int(2), &E2Options::default());
        assert!(matches!(out, Err(Error::Precondition(_))));
    }
}
