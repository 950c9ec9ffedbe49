//! Reduction of a binary cubic form to one of four canonical forms.
//!
//! The form `h = a x^3 + b x^2 y + c x y^2 + d y^3` factors over the complex
//! numbers into three linear forms. Its real root structure decides the tag:
//! one real and a conjugate pair (`x^3 + x y^2`), three distinct real
//! (`x^3 - x y^2`), a double and a simple real root (`x^2 y`), or a triple
//! root (`x^3`). The linear map sending the factors to those of the canonical
//! form is built directly from the roots.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::AffineMap;
use crate::poly::Poly2;
use crate::roots::{complex_roots_real, newton_polish_real};

/// Relative discriminant threshold separating the repeated-root branch.
pub const DISCRIMINANT_TOL: f64 = 1e-9;
/// Hessian covariant threshold separating a triple from a double root.
/// Chopping a coefficient by `1e-9` moves the covariant by up to `9e-9`, so
/// the threshold sits well above that.
pub const HESSIAN_TOL: f64 = 1e-7;
/// Leading coefficients below this (relative) trigger a pre-shear.
pub const SHEAR_TOL: f64 = 1e-6;
/// Bound on the relative residual of a returned reduction.
pub const RESIDUAL_TOL: f64 = 1e-8;

#[allow(non_camel_case_types)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CanonicalCubicForm {
    /// `x^3 + x y^2`: one real root and a complex pair.
    XXY2_PLUS,
    /// `x^3 - x y^2`: three distinct real roots.
    XXY2_MINUS,
    /// `x^2 y`: a double and a simple real root.
    X2Y,
    /// `x^3`: a triple root.
    X3,
}

impl CanonicalCubicForm {
    pub const ALL: [CanonicalCubicForm; 4] = [
        CanonicalCubicForm::XXY2_PLUS,
        CanonicalCubicForm::XXY2_MINUS,
        CanonicalCubicForm::X2Y,
        CanonicalCubicForm::X3,
    ];

    pub fn polynomial(self) -> Poly2 {
        match self {
            CanonicalCubicForm::XXY2_PLUS => Poly2::from_terms([(3, 0, 1.0), (1, 2, 1.0)]),
            CanonicalCubicForm::XXY2_MINUS => Poly2::from_terms([(3, 0, 1.0), (1, 2, -1.0)]),
            CanonicalCubicForm::X2Y => Poly2::monomial(1.0, 2, 1),
            CanonicalCubicForm::X3 => Poly2::monomial(1.0, 3, 0),
        }
    }

    /// Exponent of the coefficient that is 1 in the canonical form and used
    /// to read off the scale.
    pub fn leading_exponent(self) -> (u32, u32) {
        match self {
            CanonicalCubicForm::X2Y => (2, 1),
            _ => (3, 0),
        }
    }

    /// Real directions on which the canonical form vanishes, one per distinct
    /// real linear factor.
    fn root_directions(self) -> &'static [(f64, f64)] {
        match self {
            CanonicalCubicForm::XXY2_PLUS => &[(0.0, 1.0)],
            CanonicalCubicForm::XXY2_MINUS => &[(0.0, 1.0), (1.0, 1.0), (1.0, -1.0)],
            CanonicalCubicForm::X2Y => &[(0.0, 1.0), (1.0, 0.0)],
            CanonicalCubicForm::X3 => &[(0.0, 1.0)],
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            CanonicalCubicForm::XXY2_PLUS => "XXY2_PLUS",
            CanonicalCubicForm::XXY2_MINUS => "XXY2_MINUS",
            CanonicalCubicForm::X2Y => "X2Y",
            CanonicalCubicForm::X3 => "X3",
        }
    }
}

impl fmt::Display for CanonicalCubicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// `compose(h, linmap) = scale * form.polynomial()` up to `residual`.
#[derive(Clone, Debug, PartialEq)]
pub struct FormReduction {
    pub form: CanonicalCubicForm,
    pub linmap: AffineMap,
    pub scale: f64,
    /// `max|compose(h, linmap) - scale * form| / max|h|`.
    pub residual: f64,
}

impl FormReduction {
    /// Unit real directions along which `h` vanishes, one per distinct real
    /// linear factor.
    pub fn root_directions(&self) -> Vec<(f64, f64)> {
        let m = &self.linmap;
        self.form
            .root_directions()
            .iter()
            .map(|&(u, v)| {
                let (x, y) = (m.a * u + m.b * v, m.c * u + m.d * v);
                let n = x.hypot(y);
                (x / n, y / n)
            })
            .collect()
    }
}

/// Coefficients `[a, b, c, d]` of a binary cubic.
pub fn cubic_coefficients(h: &Poly2) -> [f64; 4] {
    [h.coeff(3, 0), h.coeff(2, 1), h.coeff(1, 2), h.coeff(0, 3)]
}

pub fn discriminant([a, b, c, d]: [f64; 4]) -> f64 {
    18.0 * a * b * c * d - 4.0 * b.powi(3) * d + b * b * c * c
        - 4.0 * a * c.powi(3)
        - 27.0 * a * a * d * d
}

/// Coefficients of the Hessian covariant; all vanish exactly for a cube.
fn hessian_covariant([a, b, c, d]: [f64; 4]) -> [f64; 3] {
    [b * b - 3.0 * a * c, b * c - 9.0 * a * d, c * c - 3.0 * b * d]
}

/// Root structure of a nonzero binary cubic with coefficients normalized to
/// unit max-norm.
pub fn root_structure(coeffs: [f64; 4]) -> CanonicalCubicForm {
    let disc = discriminant(coeffs);
    if disc < -DISCRIMINANT_TOL {
        CanonicalCubicForm::XXY2_PLUS
    } else if disc > DISCRIMINANT_TOL {
        CanonicalCubicForm::XXY2_MINUS
    } else if hessian_covariant(coeffs)
        .iter()
        .all(|v| v.abs() <= HESSIAN_TOL)
    {
        CanonicalCubicForm::X3
    } else {
        CanonicalCubicForm::X2Y
    }
}

/// Reduces the degree-3 part `h` to its canonical form.
///
/// `h` may contain terms of other degrees; only the cubic terms are used.
pub fn classify_binary_cubic(h: &Poly2) -> Result<FormReduction> {
    let h = h.homogeneous_component(3).poly;
    if h.is_zero() {
        return Err(Error::ZeroCubicPart);
    }
    let norm = h.max_abs();
    let hn = h.scale_with_chop(1.0 / norm, 0.0);
    let coeffs = cubic_coefficients(&hn);
    let form = root_structure(coeffs);
    let [a, _, _, d] = coeffs;

    let exact_axes = a == 0.0 && d == 0.0;
    let (shear, coeffs) = if !exact_axes && a.abs().max(d.abs()) < SHEAR_TOL {
        pre_shear(&hn)
    } else {
        (AffineMap::identity(), coeffs)
    };

    let linmap = reduction_map(form, coeffs, exact_axes)?;
    let linmap = AffineMap::compose(&linmap, &shear);
    let k = linmap.det().abs().sqrt().recip();
    let linmap = AffineMap::raw(linmap.a * k, linmap.b * k, 0.0, linmap.c * k, linmap.d * k, 0.0);
    finish(&h, form, linmap)
}

/// Applies `⟨x, y + t x⟩` with the first `t` in `1, -1, 2, -2, ...` making
/// the `x^3` coefficient `h(1, t)` at least [`SHEAR_TOL`].
fn pre_shear(hn: &Poly2) -> (AffineMap, [f64; 4]) {
    let shear = |t: f64| {
        let s = AffineMap::raw(1.0, 0.0, 0.0, t, 1.0, 0.0);
        (s, cubic_coefficients(&s.apply_with_chop(hn, 0.0)))
    };
    // h(1, t) has at most three roots, so one of the first few shears works.
    for k in 1..=8 {
        for t in [k as f64, -(k as f64)] {
            let (s, c) = shear(t);
            if c[0].abs() >= SHEAR_TOL {
                return (s, c);
            }
        }
    }
    shear(1.0)
}

/// A linear form `w . (x, y)` with possibly complex coefficients.
type Form = [Complex64; 2];

/// Dehomogenized chart: `XChart` factors `h` as `a ∏ (x - t y)`, `YChart`
/// as `d ∏ (y - t x)`.
#[derive(Clone, Copy)]
enum Chart {
    X,
    Y,
}

impl Chart {
    fn form(self, t: Complex64) -> Form {
        let one = Complex64::new(1.0, 0.0);
        match self {
            Chart::X => [one, -t],
            Chart::Y => [-t, one],
        }
    }

    /// The unit form completing `w` to a basis, oriented so that the
    /// coordinate axes give the identity or the swap.
    fn complement(self, w: [f64; 2]) -> [f64; 2] {
        match self {
            Chart::X => [-w[1], w[0]],
            Chart::Y => [w[1], -w[0]],
        }
    }
}

/// Chart polynomial coefficients `[p3, p2, p1, p0]` for the chart with the
/// larger leading coefficient.
fn choose_chart([a, b, c, d]: [f64; 4]) -> (Chart, [f64; 4]) {
    if a.abs() >= d.abs() {
        (Chart::X, [a, b, c, d])
    } else {
        (Chart::Y, [d, c, b, a])
    }
}

fn reduction_map(form: CanonicalCubicForm, coeffs: [f64; 4], exact_axes: bool) -> Result<AffineMap> {
    let [_, b, c, _] = coeffs;
    if exact_axes {
        // h = x y (b x + c y)
        let x = [1.0, 0.0];
        let y = [0.0, 1.0];
        return match form {
            CanonicalCubicForm::X2Y if c == 0.0 => double_root_map(x, y),
            CanonicalCubicForm::X2Y if b == 0.0 => double_root_map(y, x),
            CanonicalCubicForm::XXY2_MINUS => three_real_map([x, y, [b, c]]),
            _ => Err(Error::InternalDispatch(format!(
                "axis-aligned cubic with structure {form}"
            ))),
        };
    }
    let (chart, [p3, p2, p1, p0]) = choose_chart(coeffs);
    match form {
        CanonicalCubicForm::X3 => {
            let t0 = -p2 / (3.0 * p3);
            let w0 = chart.form(Complex64::new(t0, 0.0));
            let w0 = [w0[0].re, w0[1].re];
            invert_rows(w0, chart.complement(w0))
        }
        CanonicalCubicForm::X2Y => {
            let hess = p2 * p2 - 3.0 * p3 * p1;
            let ascending = [p0, p1, p2, p3];
            let t0 = newton_polish_real(
                &[p1, 2.0 * p2, 3.0 * p3],
                (9.0 * p3 * p0 - p2 * p1) / (2.0 * hess),
            );
            let t1 = newton_polish_real(
                &ascending,
                (4.0 * p3 * p2 * p1 - 9.0 * p3 * p3 * p0 - p2.powi(3)) / (p3 * hess),
            );
            let w0 = chart.form(Complex64::new(t0, 0.0));
            let w1 = chart.form(Complex64::new(t1, 0.0));
            double_root_map([w0[0].re, w0[1].re], [w1[0].re, w1[1].re])
        }
        CanonicalCubicForm::XXY2_MINUS | CanonicalCubicForm::XXY2_PLUS => {
            let mut roots = complex_roots_real(&[p0, p1, p2, p3]);
            if roots.len() != 3 {
                return Err(Error::InternalDispatch(format!(
                    "expected three roots, found {}",
                    roots.len()
                )));
            }
            roots.sort_by(|x, y| x.im.abs().total_cmp(&y.im.abs()));
            if form == CanonicalCubicForm::XXY2_MINUS {
                let ws: Vec<[f64; 2]> = roots
                    .iter()
                    .map(|t| {
                        let w = chart.form(Complex64::new(t.re, 0.0));
                        [w[0].re, w[1].re]
                    })
                    .collect();
                three_real_map([ws[0], ws[1], ws[2]])
            } else {
                let w1 = chart.form(Complex64::new(roots[0].re, 0.0));
                let w = chart.form(roots[1]);
                complex_pair_map([w1[0].re, w1[1].re], w)
            }
        }
    }
}

/// `M` with `rows · M = I`, i.e. the inverse of the matrix with rows `r0, r1`.
fn invert_rows(r0: [f64; 2], r1: [f64; 2]) -> Result<AffineMap> {
    AffineMap::linear(r0[0], r0[1], r1[0], r1[1])?.invert()
}

fn mat_mul(m: [[f64; 2]; 2], n: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = m[i][0] * n[0][j] + m[i][1] * n[1][j];
        }
    }
    out
}

fn to_matrix(m: &AffineMap) -> [[f64; 2]; 2] {
    [[m.a, m.b], [m.c, m.d]]
}

fn from_matrix(m: [[f64; 2]; 2]) -> AffineMap {
    AffineMap::raw(m[0][0], m[0][1], 0.0, m[1][0], m[1][1], 0.0)
}

/// 2-norm condition number of a 2x2 matrix.
fn condition(m: [[f64; 2]; 2]) -> f64 {
    let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs();
    let f2: f64 = m.iter().flatten().map(|v| v * v).sum();
    let disc = (f2 * f2 - 4.0 * det * det).max(0.0).sqrt();
    (f2 + disc) / (2.0 * det)
}

/// Sends `w0` (double) to `x` and `w1` (simple) to `y`.
fn double_root_map(w0: [f64; 2], w1: [f64; 2]) -> Result<AffineMap> {
    invert_rows(w0, w1)
}

/// Sends three real linear forms to `x`, `x - y`, `x + y`, choosing the
/// assignment with the best conditioned map.
fn three_real_map(ws: [[f64; 2]; 3]) -> Result<AffineMap> {
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut best: Option<([[f64; 2]; 2], f64)> = None;
    for [i, j, k] in PERMS {
        let Ok(winv) = invert_rows(ws[i], ws[j]) else {
            continue;
        };
        let winv = to_matrix(&winv);
        // beta = W^{-T} w3
        let beta = [
            winv[0][0] * ws[k][0] + winv[1][0] * ws[k][1],
            winv[0][1] * ws[k][0] + winv[1][1] * ws[k][1],
        ];
        if beta[0] == 0.0 || beta[1] == 0.0 {
            continue;
        }
        let alpha1 = -2.0 * beta[1] / beta[0];
        let dt = [[alpha1, 0.0], [1.0, -1.0]];
        let m = mat_mul(winv, dt);
        let cond = condition(m);
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let better = match best {
            None => true,
            Some((bm, bc)) => {
                let bdet = bm[0][0] * bm[1][1] - bm[0][1] * bm[1][0];
                cond < bc * (1.0 - 1e-12) || (cond <= bc * (1.0 + 1e-12) && det > 0.0 && bdet < 0.0)
            }
        };
        if better && cond.is_finite() {
            best = Some((m, cond));
        }
    }
    best.map(|(m, _)| from_matrix(m))
        .ok_or_else(|| Error::InternalDispatch("real roots are not distinct".into()))
}

/// Sends the real form `w1` to a multiple of `x` and the product of the
/// conjugate pair `w, w̄` to `x^2 + y^2`.
fn complex_pair_map(w1: [f64; 2], w: Form) -> Result<AffineMap> {
    // Either member of the pair works; pick the one giving det K > 0 so that
    // the canonical form maps to the identity.
    let det = w[0].re * w[1].im - w[1].re * w[0].im;
    let w = if det < 0.0 { [w[0].conj(), w[1].conj()] } else { w };
    let kinv = to_matrix(&invert_rows([w[0].re, w[1].re], [w[0].im, w[1].im])?);
    // z = K^{-T} w1
    let z = [
        kinv[0][0] * w1[0] + kinv[1][0] * w1[1],
        kinv[0][1] * w1[0] + kinv[1][1] * w1[1],
    ];
    let n = z[0].hypot(z[1]);
    let r = [z[0] / n, z[1] / n];
    let rot = [[r[0], -r[1]], [r[1], r[0]]];
    Ok(from_matrix(mat_mul(kinv, rot)))
}

fn finish(h: &Poly2, form: CanonicalCubicForm, linmap: AffineMap) -> Result<FormReduction> {
    let image = linmap.apply_with_chop(h, 0.0);
    let (i, j) = form.leading_exponent();
    let scale = image.coeff(i, j);
    let residual = image.max_abs_diff(&form.polynomial().scale(scale)) / h.max_abs();
    if scale == 0.0 || !(residual <= RESIDUAL_TOL) {
        return Err(Error::ResidualTooLarge {
            residual,
            bound: RESIDUAL_TOL,
        });
    }
    Ok(FormReduction {
        form,
        linmap,
        scale,
        residual,
    })
}
