//! Singular and reducible levels of a cubic.
//!
//! For a polynomial `f` the level `f = r` is singular exactly when `r` is a
//! critical value. Critical points are found by eliminating `y` from
//! `f_x = f_y = 0` with a Sylvester resultant, solving the univariate
//! resultant with simultaneous iteration and back-substituting. Real
//! singular points are typed by the Hessian (node, isolated point) and, in
//! the rank-one case, by the cubic term along the kernel (cusp).
//!
//! Reducible levels come from lines contained in a level set. Such a line
//! must point along a real root direction of the cubic part, which leaves a
//! small polynomial system in the line's offset.

use num_complex::Complex64;

use crate::cubic_form::classify_binary_cubic;
use crate::error::{Error, Result};
use crate::group::AffineMap;
use crate::poly::Poly2;
use crate::roots::{complex_roots, complex_roots_real, poly_determinant, UniPoly};

/// Critical values closer than this are merged.
pub const CLUSTER_TOL: f64 = 1e-7;
/// Hessian determinant threshold, relative to the squared Hessian norm.
const HESSIAN_DET_TOL: f64 = 1e-6;
/// Threshold on the cubic term along the Hessian kernel.
const CUSP_TOL: f64 = 1e-8;
/// Imaginary parts below this (relative) make a point real.
const REAL_TOL: f64 = 1e-7;
/// Points closer than this are the same critical point.
const POINT_TOL: f64 = 1e-6;

/// Type of a real singular point of a level curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingularityKind {
    Node,
    Cusp,
    Isolated,
}

/// All five level sets of a cubic.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct InvariantReport {
    pub cusp: Vec<f64>,
    pub isol: Vec<f64>,
    pub node: Vec<f64>,
    pub red: Vec<f64>,
    /// Complex critical values, sorted by `(re, im)`.
    pub sing_complex: Vec<Complex64>,
    /// The partials share a factor, so some level has a curve of singular
    /// points; the singular sets are then left empty.
    pub nonisolated_singular_locus: bool,
    /// Every level contains a line; `red` is then left empty.
    pub red_continuum: bool,
    /// Levels of real singular points that are neither nodes, cusps nor
    /// isolated points (only possible for reducible levels).
    pub other_singular: Vec<f64>,
}

/// A line `a x + b y + c = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Line {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl std::fmt::Display for Line {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let p = Poly2::from_terms([(1, 0, self.a), (0, 1, self.b), (0, 0, self.c)]);
        write!(f, "{p} = 0")
    }
}

/// Coefficients of `p` as a polynomial in `y`, each a polynomial in `x`.
fn y_coefficients(p: &Poly2) -> Vec<UniPoly> {
    let deg = p.degree_in_y().unwrap_or(0) as usize;
    let mut out = vec![UniPoly::zero(); deg + 1];
    for ((i, j), c) in p.terms() {
        let v = &mut out[j as usize].0;
        if v.len() <= i as usize {
            v.resize(i as usize + 1, 0.0);
        }
        v[i as usize] += c;
    }
    out
}

/// `Res_y(p, q)` as a polynomial in `x`.
fn resultant_y(p: &Poly2, q: &Poly2) -> UniPoly {
    let a = y_coefficients(p);
    let b = y_coefficients(q);
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    if size == 0 {
        return UniPoly(vec![1.0]);
    }
    let mut rows = vec![vec![UniPoly::zero(); size]; size];
    for r in 0..n {
        for (k, c) in a.iter().rev().enumerate() {
            rows[r][r + k] = c.clone();
        }
    }
    for r in 0..m {
        for (k, c) in b.iter().rev().enumerate() {
            rows[n + r][r + k] = c.clone();
        }
    }
    poly_determinant(&rows)
}

/// Coefficients in `y` of `p(x0, y)`, ascending.
fn specialize_x(p: &Poly2, x0: Complex64) -> Vec<Complex64> {
    y_coefficients(p)
        .iter()
        .map(|c| c.eval_complex(x0))
        .collect()
}

fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().fold(0.0, |m, c| m.max(c.norm()))
}

/// Complex Newton iteration on `grad f = 0`.
fn polish_point(fx: &Poly2, fy: &Poly2, hess: &[Poly2; 3], mut p: (Complex64, Complex64)) -> (Complex64, Complex64) {
    for _ in 0..200 {
        let g1 = fx.evaluate_complex(p.0, p.1);
        let g2 = fy.evaluate_complex(p.0, p.1);
        let a = hess[0].evaluate_complex(p.0, p.1);
        let b = hess[1].evaluate_complex(p.0, p.1);
        let d = hess[2].evaluate_complex(p.0, p.1);
        let det = a * d - b * b;
        if det.norm() == 0.0 {
            break;
        }
        let dx = (d * g1 - b * g2) / det;
        let dy = (a * g2 - b * g1) / det;
        let next = (p.0 - dx, p.1 - dy);
        if !(next.0.is_finite() && next.1.is_finite()) {
            break;
        }
        // Reject steps that increase the gradient norm.
        let before = g1.norm() + g2.norm();
        let after = fx.evaluate_complex(next.0, next.1).norm() + fy.evaluate_complex(next.0, next.1).norm();
        if after > before && before > 0.0 {
            break;
        }
        p = next;
        let step = dx.norm() + dy.norm();
        if step <= 1e-15 * (1.0 + p.0.norm() + p.1.norm()) {
            break;
        }
    }
    p
}

/// All complex critical points of `f`.
pub fn critical_points(f: &Poly2) -> Result<Vec<(Complex64, Complex64)>> {
    let scale = f.max_abs();
    if scale == 0.0 {
        return Err(Error::NotCubic(None));
    }
    let f = f.scale(1.0 / scale);
    let (fx, fy) = f.gradient();
    if fx.is_zero() || fy.is_zero() {
        let other = if fx.is_zero() { &fy } else { &fx };
        return if other.degree().unwrap_or(0) == 0 && !other.is_zero() {
            Ok(Vec::new())
        } else {
            Err(Error::NonIsolatedLocus)
        };
    }
    let hess = [fx.diff_x(), fx.diff_y(), fy.diff_y()];
    let res = resultant_y(&fx, &fy);
    let (m, n) = (fx.degree_in_y().unwrap_or(0), fy.degree_in_y().unwrap_or(0));
    let bound = fx.max_abs().powi(n as i32) * fy.max_abs().powi(m as i32);
    if res.max_abs() <= 1e-10 * bound {
        return Err(Error::NonIsolatedLocus);
    }
    let xs = complex_roots_real(&res.0);

    let mut points: Vec<(Complex64, Complex64)> = Vec::new();
    for x0 in xs {
        let cx = specialize_x(&fx, x0);
        let cy = specialize_x(&fy, x0);
        let size = 1.0 + x0.norm();
        let tiny = 1e-6 * size * size;
        if max_norm(&cx) <= tiny && max_norm(&cy) <= tiny {
            return Err(Error::NonIsolatedLocus);
        }
        let mut candidates = complex_roots(&cx);
        candidates.extend(complex_roots(&cy));
        for y0 in candidates {
            let s = 1.0 + x0.norm() + y0.norm();
            let gx = fx.evaluate_complex(x0, y0).norm();
            let gy = fy.evaluate_complex(x0, y0).norm();
            if gx.max(gy) > 1e-5 * s * s {
                continue;
            }
            let p = polish_point(&fx, &fy, &hess, (x0, y0));
            let s = 1.0 + p.0.norm() + p.1.norm();
            let gx = fx.evaluate_complex(p.0, p.1).norm();
            let gy = fy.evaluate_complex(p.0, p.1).norm();
            if gx.max(gy) > 1e-9 * s * s {
                continue;
            }
            let dup = points
                .iter()
                .any(|q| (q.0 - p.0).norm() + (q.1 - p.1).norm() <= POINT_TOL * s);
            if !dup {
                points.push(p);
            }
        }
    }
    Ok(points)
}

fn is_real_point(p: &(Complex64, Complex64)) -> bool {
    let s = 1.0 + p.0.re.abs() + p.1.re.abs();
    p.0.im.abs() <= REAL_TOL * s && p.1.im.abs() <= REAL_TOL * s
}

/// Real solutions of `f_x = f_y = 0`, sorted.
pub fn critical_points_real(f: &Poly2) -> Result<Vec<(f64, f64)>> {
    let mut pts: Vec<(f64, f64)> = critical_points(f)?
        .iter()
        .filter(|p| is_real_point(p))
        .map(|p| (p.0.re, p.1.re))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    Ok(pts)
}

/// Types the singular point `p` of the level `f = r`.
pub fn classify_singularity(f: &Poly2, p: (f64, f64), r: f64) -> Result<SingularityKind> {
    let scale = f.max_abs().max(f64::MIN_POSITIVE);
    let value = f.evaluate(p.0, p.1);
    let size = 1.0 + p.0.abs() + p.1.abs();
    if (value - r).abs() > 1e-8 * scale * size.powi(3) {
        return Err(Error::Degenerate(format!("f(p) = {value} differs from level {r}")));
    }
    let fxx = f.diff_x().diff_x().evaluate(p.0, p.1);
    let fxy = f.diff_x().diff_y().evaluate(p.0, p.1);
    let fyy = f.diff_y().diff_y().evaluate(p.0, p.1);
    let norm2 = fxx * fxx + 2.0 * fxy * fxy + fyy * fyy;
    let det = fxx * fyy - fxy * fxy;
    if norm2.sqrt() <= 1e-8 * scale * size {
        return Err(Error::Degenerate("vanishing Hessian".into()));
    }
    if det < -HESSIAN_DET_TOL * norm2 {
        return Ok(SingularityKind::Node);
    }
    if det > HESSIAN_DET_TOL * norm2 {
        return Ok(SingularityKind::Isolated);
    }
    // Rank one: kernel of [[fxx, fxy], [fxy, fyy]] along the smaller row.
    let (u, v) = if fxx.abs() >= fyy.abs() { (-fxy, fxx) } else { (fyy, -fxy) };
    let n = u.hypot(v);
    let (u, v) = (u / n, v / n);
    let cubic = f.homogeneous_component(3).poly;
    if cubic.evaluate(u, v).abs() > CUSP_TOL * scale {
        Ok(SingularityKind::Cusp)
    } else {
        Err(Error::Degenerate("cubic term vanishes along the Hessian kernel".into()))
    }
}

/// Sorts and merges values closer than [`CLUSTER_TOL`] (relative to
/// `max(1, |v|)`).
fn cluster(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::new();
    for x in v {
        match out.last() {
            Some(&last) if (x - last).abs() <= CLUSTER_TOL * x.abs().max(1.0) => {}
            _ => out.push(x),
        }
    }
    out
}

/// Complex critical values, closed under conjugation and sorted by
/// `(re, im)`.
pub fn sing_levels_complex(f: &Poly2) -> Result<Vec<Complex64>> {
    let pts = critical_points(f)?;
    let mut vals: Vec<Complex64> = pts
        .iter()
        .map(|p| f.evaluate_complex(p.0, p.1))
        .collect();
    let tol = |z: Complex64| CLUSTER_TOL * z.norm().max(1.0);
    for z in &mut vals {
        if z.im.abs() <= tol(*z) {
            z.im = 0.0;
        }
    }
    // Symmetrize: the conjugate of each value is also a critical value.
    let conj: Vec<Complex64> = vals.iter().map(|z| z.conj()).collect();
    vals.extend(conj);
    vals.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut out: Vec<Complex64> = Vec::new();
    for z in vals {
        if !out.iter().any(|w| (*w - z).norm() <= tol(z)) {
            out.push(z);
        }
    }
    // Pair each value with the exact conjugate of its partner.
    let snapshot = out.clone();
    for z in &mut out {
        if z.im < 0.0 {
            if let Some(w) = snapshot.iter().find(|w| (w.conj() - *z).norm() <= tol(*z) && w.im > 0.0) {
                *z = w.conj();
            }
        }
    }
    out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(out)
}

/// A candidate line `n . (x, y) = offset` along a real root direction, and
/// the level `f` takes on it.
struct LevelLine {
    normal: (f64, f64),
    offset: f64,
    level: f64,
}

/// Lines on which `f` is constant. Errors with [`Error::ContinuumOfLevels`]
/// when a whole family of parallel lines qualifies.
fn constant_lines(f: &Poly2) -> Result<Vec<LevelLine>> {
    let red = classify_binary_cubic(f)?;
    let mut lines = Vec::new();
    for (d1, d2) in red.root_directions() {
        let (n1, n2) = (-d2, d1);
        let rot = AffineMap::raw(d1, n1, 0.0, d2, n2, 0.0);
        let g = rot.apply_with_chop(f, 0.0);
        let scale = g.max_abs();
        let zero = |v: f64| v.abs() <= 1e-9 * scale;
        let (g20, g21) = (g.coeff(2, 0), g.coeff(2, 1));
        let p1 = [g.coeff(1, 0), g.coeff(1, 1), g.coeff(1, 2)];
        let p1_at = |b: f64| p1[0] + p1[1] * b + p1[2] * b * b;
        let offsets: Vec<f64> = if !zero(g21) {
            let b = -g20 / g21;
            if p1_at(b).abs() <= 1e-8 * scale * (1.0 + b * b) {
                vec![b]
            } else {
                vec![]
            }
        } else if !zero(g20) {
            vec![]
        } else if p1.iter().all(|&c| zero(c)) {
            return Err(Error::ContinuumOfLevels);
        } else {
            complex_roots_real(&p1)
                .into_iter()
                .filter(|z| z.im.abs() <= 1e-6 * (1.0 + z.re.abs()))
                .map(|z| z.re)
                .collect()
        };
        for b in offsets {
            let level = g.evaluate(0.0, b);
            lines.push(LevelLine {
                normal: (n1, n2),
                offset: b,
                level,
            });
        }
    }
    Ok(lines)
}

/// Levels `s` for which `f - s` has a linear factor.
pub fn red_levels(f: &Poly2) -> Result<Vec<f64>> {
    Ok(cluster(constant_lines(f)?.into_iter().map(|l| l.level).collect()))
}

/// Normalizes so that `(a, b)` is a unit vector with first nonzero entry
/// positive.
fn normalize_line(n: (f64, f64), offset: f64) -> Line {
    let (a, b, c) = (n.0, n.1, -offset);
    let flip = if a.abs() > 1e-12 { a < 0.0 } else { b < 0.0 };
    let s = if flip { -1.0 } else { 1.0 };
    let clean = |v: f64| if v.abs() < 1e-14 { 0.0 } else { v * s };
    Line {
        a: clean(a),
        b: clean(b),
        c: clean(c),
    }
}

/// A line on which `f` vanishes identically, if any. Among several, the one
/// with the lexicographically greatest normalized `(a, b, c)` is returned,
/// so that `x = 0` is preferred to `y = 0`.
pub fn find_linear_factor(f: &Poly2) -> Option<Line> {
    let scale = f.max_abs();
    let lines = match constant_lines(f) {
        Ok(lines) => lines,
        Err(Error::ContinuumOfLevels) => {
            // f = p(ℓ) for a linear form ℓ; its real roots give lines.
            return continuum_factor(f);
        }
        Err(_) => return None,
    };
    lines
        .into_iter()
        .filter(|l| l.level.abs() <= 1e-8 * scale)
        .map(|l| normalize_line(l.normal, l.offset))
        .filter(|line| vanishes_on(f, line))
        .max_by(|p, q| {
            p.a.total_cmp(&q.a)
                .then(p.b.total_cmp(&q.b))
                .then(p.c.total_cmp(&q.c))
        })
}

/// Checks `|f| <= 1e-8 * max|f|` at four points of the line.
fn vanishes_on(f: &Poly2, line: &Line) -> bool {
    let scale = f.max_abs();
    let (p0x, p0y) = (-line.c * line.a, -line.c * line.b);
    [-2.0, -0.5, 1.0, 3.0].iter().all(|&t| {
        let (x, y) = (p0x - t * line.b, p0y + t * line.a);
        f.evaluate(x, y).abs() <= 1e-8 * scale * (1.0 + x.abs() + y.abs()).powi(3)
    })
}

/// For `f` a cubic in one linear form, a real root line.
fn continuum_factor(f: &Poly2) -> Option<Line> {
    let red = classify_binary_cubic(f).ok()?;
    let (d1, d2) = *red.root_directions().first()?;
    let (n1, n2) = (-d2, d1);
    let rot = AffineMap::raw(d1, n1, 0.0, d2, n2, 0.0);
    let g = rot.apply_with_chop(f, 0.0);
    let coeffs: Vec<f64> = (0..=3).map(|k| g.coeff(0, k)).collect();
    complex_roots_real(&coeffs)
        .into_iter()
        .filter(|z| z.im.abs() <= 1e-7 * (1.0 + z.re.abs()))
        .map(|z| normalize_line((n1, n2), z.re))
        .filter(|line| vanishes_on(f, line))
        .max_by(|p, q| {
            p.a.total_cmp(&q.a)
                .then(p.b.total_cmp(&q.b))
                .then(p.c.total_cmp(&q.c))
        })
}

/// Computes all level sets. Degenerate situations become flags rather than
/// errors.
pub fn invariant_report(f: &Poly2) -> Result<InvariantReport> {
    if f.degree() != Some(3) {
        return Err(Error::NotCubic(f.degree()));
    }
    let mut report = InvariantReport::default();
    match red_levels(f) {
        Ok(red) => report.red = red,
        Err(Error::ContinuumOfLevels) => report.red_continuum = true,
        Err(e) => return Err(e),
    }
    let points = match critical_points(f) {
        Ok(points) => points,
        Err(Error::NonIsolatedLocus) => {
            report.nonisolated_singular_locus = true;
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    let (mut cusp, mut isol, mut node, mut other) = (vec![], vec![], vec![], vec![]);
    for p in points.iter().filter(|p| is_real_point(p)) {
        let (x, y) = (p.0.re, p.1.re);
        let r = f.evaluate(x, y);
        match classify_singularity(f, (x, y), r) {
            Ok(SingularityKind::Cusp) => cusp.push(r),
            Ok(SingularityKind::Isolated) => isol.push(r),
            Ok(SingularityKind::Node) => node.push(r),
            Err(_) => other.push(r),
        }
    }
    report.cusp = cluster(cusp);
    report.isol = cluster(isol);
    report.node = cluster(node);
    report.other_singular = cluster(other);
    report.sing_complex = sing_levels_complex(f)?;
    Ok(report)
}

/// Expected level sets for one cubic. `None` marks a set that is not
/// checked.
#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub poly: Poly2,
    pub cusp: Option<Vec<f64>>,
    pub isol: Option<Vec<f64>>,
    pub node: Option<Vec<f64>>,
    pub red: Option<Vec<f64>>,
}

/// Outcome of checking one [`TableRow`].
#[derive(Clone, Debug, PartialEq)]
pub struct TableCheck {
    pub row: TableRow,
    pub report: Option<InvariantReport>,
    pub pass: bool,
}

/// Level sets of the representatives with cubic part `x^3`, for
/// `J` in `{0, 1, -2}`. The node sets of `x^3 - x*y (+ 1)` are left
/// unchecked: their reducible level also carries a node at the origin.
pub fn invariant_table() -> Vec<TableRow> {
    let v = 2.0 * 3f64.sqrt() / 9.0;
    let x = Poly2::x();
    let y = Poly2::y();
    let x3 = x.pow(3);
    let y2 = y.pow(2);
    let xy = x.mul(&y);
    let c = Poly2::constant;
    let some = |v: &[f64]| Some(v.to_vec());
    let mut rows = Vec::new();
    for j in [0.0, 1.0, -2.0] {
        rows.push(TableRow {
            poly: x3.sub(&y2).add(&x).add(&c(j)),
            cusp: some(&[]),
            isol: some(&[]),
            node: some(&[]),
            red: some(&[]),
        });
        rows.push(TableRow {
            poly: x3.sub(&y2).sub(&x).add(&c(j)),
            cusp: some(&[]),
            isol: some(&[j + v]),
            node: some(&[j - v]),
            red: some(&[]),
        });
    }
    for (poly, cusp) in [
        (x3.sub(&y2).add(&c(1.0)), vec![1.0]),
        (x3.sub(&y2).sub(&c(1.0)), vec![-1.0]),
        (x3.sub(&y2), vec![0.0]),
        (x3.sub(&y), vec![]),
    ] {
        rows.push(TableRow {
            poly,
            cusp: Some(cusp),
            isol: some(&[]),
            node: some(&[]),
            red: some(&[]),
        });
    }
    for (poly, red) in [(x3.sub(&xy).add(&c(1.0)), 1.0), (x3.sub(&xy), 0.0)] {
        rows.push(TableRow {
            poly,
            cusp: some(&[]),
            isol: some(&[]),
            node: None,
            red: some(&[red]),
        });
    }
    rows
}

/// Runs [`invariant_report`] on every row of [`invariant_table`].
pub fn check_invariant_table() -> Vec<TableCheck> {
    let matches = |got: &[f64], want: &Option<Vec<f64>>| match want {
        None => true,
        Some(w) => {
            got.len() == w.len() && got.iter().zip(w).all(|(a, b)| (a - b).abs() <= 1e-7)
        }
    };
    invariant_table()
        .into_iter()
        .map(|row| {
            let report = invariant_report(&row.poly).ok();
            let pass = report.as_ref().is_some_and(|r| {
                matches(&r.cusp, &row.cusp)
                    && matches(&r.isol, &row.isol)
                    && matches(&r.node, &row.node)
                    && matches(&r.red, &row.red)
            });
            TableCheck { row, report, pass }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn poly(text: &str) -> Poly2 {
        parse_poly(text).unwrap()
    }

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-7)
    }

    /// Critical value of x^3 - x at its critical points, by direct
    /// arithmetic.
    fn two_root3_over_9() -> f64 {
        2.0 * 3f64.sqrt() / 9.0
    }

    #[test]
    fn critical_point_examples() {
        let p = critical_points_real(&poly("x^3 - y^2")).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p[0].0.abs() < 1e-6 && p[0].1.abs() < 1e-12);

        let p = critical_points_real(&poly("x^3 - y^2 - x")).unwrap();
        let r = 1.0 / 3f64.sqrt();
        assert_eq!(p.len(), 2);
        assert!((p[0].0 + r).abs() < 1e-12 && p[0].1.abs() < 1e-12);
        assert!((p[1].0 - r).abs() < 1e-12 && p[1].1.abs() < 1e-12);

        assert_eq!(critical_points(&poly("x^3")), Err(Error::NonIsolatedLocus));
        assert_eq!(critical_points(&poly("x^2*y")), Err(Error::NonIsolatedLocus));
        assert_eq!(critical_points(&poly("(x + 2*y)^2*(x - y)")), Err(Error::NonIsolatedLocus));
        assert!(critical_points(&poly("x^3 - y")).unwrap().is_empty());
    }

    #[test]
    fn singularity_examples() {
        let f = poly("x^3 - y^2");
        assert_eq!(classify_singularity(&f, (0.0, 0.0), 0.0), Ok(SingularityKind::Cusp));
        let f = poly("x^3 - y^2 - x");
        let r = 1.0 / 3f64.sqrt();
        let v = two_root3_over_9();
        assert_eq!(classify_singularity(&f, (r, 0.0), -v), Ok(SingularityKind::Node));
        assert_eq!(classify_singularity(&f, (-r, 0.0), v), Ok(SingularityKind::Isolated));
    }

    #[test]
    fn report_examples() {
        let r = invariant_report(&poly("x^3 - y^2 + 1")).unwrap();
        assert!(close(&r.cusp, &[1.0]));
        assert!(r.isol.is_empty() && r.node.is_empty() && r.red.is_empty());
        assert_eq!(r.sing_complex.len(), 1);
        assert!((r.sing_complex[0] - Complex64::new(1.0, 0.0)).norm() < 1e-7);

        let r = invariant_report(&poly("x^3 - x*y")).unwrap();
        assert!(close(&r.red, &[0.0]));
        assert!(close(&r.node, &[0.0]));
        assert!(r.cusp.is_empty() && r.isol.is_empty());

        let r = invariant_report(&poly("x^3 - y")).unwrap();
        assert_eq!(r, InvariantReport::default());

        let r = invariant_report(&poly("x^3")).unwrap();
        assert!(r.nonisolated_singular_locus && r.red_continuum);
    }

    #[test]
    fn reducible_levels() {
        assert!(close(&red_levels(&poly("x^3 - x*y")).unwrap(), &[0.0]));
        assert!(close(&red_levels(&poly("x^3 - x*y + 1")).unwrap(), &[1.0]));
        assert!(red_levels(&poly("x^3 - y^2")).unwrap().is_empty());
        assert_eq!(red_levels(&poly("x^3")), Err(Error::ContinuumOfLevels));
        // (x - y - 1)(x^2 + y^2 + 1) + 4: the only reducible level is 4.
        let f = poly("(x - y - 1)*(x^2 + y^2 + 1) + 4");
        assert!(close(&red_levels(&f).unwrap(), &[4.0]));
    }

    #[test]
    fn linear_factor_examples() {
        let l = find_linear_factor(&poly("x^3 - x*y")).unwrap();
        assert_eq!((l.a, l.b, l.c), (1.0, 0.0, 0.0));
        let l = find_linear_factor(&poly("x^2*y")).unwrap();
        assert_eq!((l.a, l.b, l.c), (1.0, 0.0, 0.0));
        assert_eq!(find_linear_factor(&poly("x^3 - x*y + 1")), None);
        let l = find_linear_factor(&poly("(x + y - 2)*(x^2 - y)")).unwrap();
        let s = 0.5f64.sqrt();
        assert!((l.a - s).abs() < 1e-12 && (l.b - s).abs() < 1e-12 && (l.c + 2.0 * s).abs() < 1e-12);
        let l = find_linear_factor(&poly("x^3 - 8")).unwrap();
        assert!((l.a - 1.0).abs() < 1e-12 && (l.c + 2.0).abs() < 1e-9);
    }

    #[test]
    fn table_rows_pass() {
        let checks = check_invariant_table();
        assert_eq!(checks.len(), 12);
        for c in checks {
            assert!(c.pass, "{}: {:?}", c.row.poly, c.report);
        }
    }

    #[test]
    fn complex_sing_levels() {
        let v = two_root3_over_9();
        let s = sing_levels_complex(&poly("x^3 - y^2 + x")).unwrap();
        assert_eq!(s.len(), 2);
        assert!((s[0] - Complex64::new(0.0, -v)).norm() < 1e-7);
        assert!((s[1] - Complex64::new(0.0, v)).norm() < 1e-7);
        assert_eq!(s[0], s[1].conj());
        assert!(sing_levels_complex(&poly("x^3 - y")).unwrap().is_empty());
        let s = sing_levels_complex(&poly("x^3 - y^2 - x")).unwrap();
        assert_eq!(s.len(), 2);
        assert!((s[0].re + v).abs() < 1e-7 && s[0].im == 0.0);
        assert!((s[1].re - v).abs() < 1e-7 && s[1].im == 0.0);
    }
}
