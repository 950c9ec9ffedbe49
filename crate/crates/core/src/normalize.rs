//! Table-driven reduction of a cubic to its affine normal form.
//!
//! The pipeline has three stages, each an affine substitution:
//!
//! 1. the cubic part is reduced to one of four canonical binary cubics,
//!    leaving `canonical + E x^2 + F x y + G y^2 + (linear part)`;
//! 2. a "high" table removes the quadratic terms (or all but one), giving
//!    one of nine reduced shapes `c (shape + H x + I y + J)`;
//! 3. a "low" table normalizes `H`, `I`, `J` to the catalogue row.
//!
//! Each stage reads its scale off the leading coefficient of the image, so
//! the accumulated scale is carried separately from the polynomial. The final
//! witness is checked against the input independently of the intermediate
//! arithmetic.

use std::fmt;

use crate::cubic_form::{classify_binary_cubic, CanonicalCubicForm, FormReduction};
use crate::error::{Error, Result};
use crate::family::{FamilyId, Params, CONSTRAINT_TOL};
use crate::group::AffineMap;
use crate::poly::Poly2;

/// Numerical tolerances for the classification pipeline.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Relative coefficient chop.
    pub chop: f64,
    /// Tolerance of equality tests in table guards.
    pub case: f64,
    /// Bound on the relative residual of the final witness.
    pub residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            chop: 1e-9,
            case: 1e-9,
            residual: 1e-6,
        }
    }
}

/// Signum that sends zero to one: `-1` iff `t < -eps`.
pub fn sigma(t: f64, eps: f64) -> f64 {
    if t < -eps {
        -1.0
    } else {
        1.0
    }
}

/// `canonical cubic + E x^2 + F x y + G y^2 + lin`.
#[derive(Clone, Debug, PartialEq)]
pub struct MidForm {
    pub form: CanonicalCubicForm,
    pub e: f64,
    pub f: f64,
    pub g: f64,
    /// Terms of degree at most one.
    pub lin: Poly2,
}

impl MidForm {
    pub fn polynomial(&self) -> Poly2 {
        let mut p = self
            .form
            .polynomial()
            .add_raw_term(2, 0, self.e)
            .add_raw_term(1, 1, self.f)
            .add_raw_term(0, 2, self.g);
        for ((i, j), c) in self.lin.terms() {
            p = p.add_raw_term(i, j, c);
        }
        p
    }
}

/// The nine shapes produced by the high tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReducedKind {
    /// `x^3 + x y^2 + x^2`
    K1,
    /// `x^3 + x y^2`
    K2,
    /// `x^3 - x y^2`
    K3,
    /// `x^3 - x y^2 - y^2`
    K4,
    /// `x^2 y + y^2`
    K5,
    /// `x^2 y`
    K6,
    /// `x^3 - y^2`
    K7,
    /// `x^3 - x y`
    K8,
    /// `x^3`
    K9,
}

impl ReducedKind {
    /// The part of the shape of degree at least two.
    pub fn head(self) -> Poly2 {
        let t: &[(u32, u32, f64)] = match self {
            ReducedKind::K1 => &[(3, 0, 1.0), (1, 2, 1.0), (2, 0, 1.0)],
            ReducedKind::K2 => &[(3, 0, 1.0), (1, 2, 1.0)],
            ReducedKind::K3 => &[(3, 0, 1.0), (1, 2, -1.0)],
            ReducedKind::K4 => &[(3, 0, 1.0), (1, 2, -1.0), (0, 2, -1.0)],
            ReducedKind::K5 => &[(2, 1, 1.0), (0, 2, 1.0)],
            ReducedKind::K6 => &[(2, 1, 1.0)],
            ReducedKind::K7 => &[(3, 0, 1.0), (0, 2, -1.0)],
            ReducedKind::K8 => &[(3, 0, 1.0), (1, 1, -1.0)],
            ReducedKind::K9 => &[(3, 0, 1.0)],
        };
        Poly2::from_terms(t.iter().copied())
    }

    fn leading_exponent(self) -> (u32, u32) {
        match self {
            ReducedKind::K5 | ReducedKind::K6 => (2, 1),
            _ => (3, 0),
        }
    }

    pub fn index(self) -> u8 {
        self as u8 + 1
    }
}

impl fmt::Display for ReducedKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.index())
    }
}

/// `c (shape + H x + I y + J)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReducedForm {
    pub kind: ReducedKind,
    pub c: f64,
    pub h: f64,
    pub i: f64,
    pub j: f64,
}

impl ReducedForm {
    /// The shape with `c` divided out.
    pub fn polynomial(&self) -> Poly2 {
        self.kind
            .head()
            .add_raw_term(1, 0, self.h)
            .add_raw_term(0, 1, self.i)
            .add_raw_term(0, 0, self.j)
    }
}

/// One applied table row.
#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub table: &'static str,
    pub case: &'static str,
    pub map: AffineMap,
    /// Derived scalars such as `alpha`, `beta`, `gamma`.
    pub scalars: Vec<(&'static str, f64)>,
    /// Quantities compared against zero while choosing the row.
    pub guards: Vec<(&'static str, f64)>,
}

/// The steps of one classification, in application order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct StepTrace {
    pub steps: Vec<Step>,
}

impl StepTrace {
    /// The composition of all step maps, first step applied first.
    pub fn composed(&self) -> AffineMap {
        self.steps
            .iter()
            .fold(AffineMap::identity(), |acc, s| AffineMap::compose(&s.map, &acc))
    }

    /// Nonzero guards within `10 * eps` of a case boundary.
    pub fn near_boundary(&self, eps: f64) -> Vec<(&'static str, &'static str, f64)> {
        self.guards_in(0.0, 10.0 * eps)
    }

    /// Guards between `eps / 10` and `10 * eps`: too large to be round-off
    /// on an exact boundary, too small to be clearly off it.
    pub fn ambiguous(&self, eps: f64) -> Vec<(&'static str, &'static str, f64)> {
        self.guards_in(0.1 * eps, 10.0 * eps)
    }

    fn guards_in(&self, lo: f64, hi: f64) -> Vec<(&'static str, &'static str, f64)> {
        self.steps
            .iter()
            .flat_map(|s| {
                s.guards
                    .iter()
                    .filter(move |(_, v)| v.abs() < hi && v.abs() >= lo && *v != 0.0)
                    .map(move |&(name, v)| (s.table, name, v))
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationResult {
    pub family: FamilyId,
    pub params: Params,
    /// `compose(f, witness) = scale * canonical` up to `residual`.
    pub witness: AffineMap,
    pub scale: f64,
    pub residual: f64,
    pub canonical: Poly2,
    pub trace: StepTrace,
}

/// Guard evaluation with a recorded trail.
struct Guards {
    eps: f64,
    seen: Vec<(&'static str, f64)>,
}

impl Guards {
    fn new(eps: f64) -> Self {
        Self {
            eps,
            seen: Vec::new(),
        }
    }

    /// `|v| <= eps * max(1, mag)`.
    fn zero(&mut self, name: &'static str, v: f64, mag: f64) -> bool {
        self.seen.push((name, v / mag.max(1.0)));
        v.abs() <= self.eps * mag.max(1.0)
    }

    /// `v > 0` beyond the tolerance.
    fn positive(&mut self, name: &'static str, v: f64, mag: f64) -> bool {
        self.seen.push((name, v / mag.max(1.0)));
        v > self.eps * mag.max(1.0)
    }

    fn sigma(&self, t: f64) -> f64 {
        sigma(t, self.eps)
    }
}

/// Reduces the cubic part and reads off `E`, `F`, `G` and the linear part.
pub fn to_mid_form(f: &Poly2) -> Result<(MidForm, FormReduction)> {
    to_mid_form_with(f, Tolerances::default().chop)
}

/// As [`to_mid_form`]; the image of `f` is chopped at `chop` before the
/// coefficients are read.
pub fn to_mid_form_with(f: &Poly2, chop: f64) -> Result<(MidForm, FormReduction)> {
    let degree = f.clone().chop(chop).degree();
    if degree != Some(3) {
        return Err(Error::NotCubic(degree));
    }
    let red = classify_binary_cubic(f)?;
    let image = red
        .linmap
        .apply_with_chop(f, 0.0)
        .scale_with_chop(1.0 / red.scale, chop);
    let lin = Poly2::zero()
        .add_raw_term(1, 0, image.coeff(1, 0))
        .add_raw_term(0, 1, image.coeff(0, 1))
        .add_raw_term(0, 0, image.coeff(0, 0));
    let mid = MidForm {
        form: red.form,
        e: image.coeff(2, 0),
        f: image.coeff(1, 1),
        g: image.coeff(0, 2),
        lin,
    };
    Ok((mid, red))
}

/// Applies `map` to `p` and divides by the coefficient at `lead`.
fn apply_normalized(p: &Poly2, map: &AffineMap, lead: (u32, u32)) -> Result<(Poly2, f64)> {
    let image = map.apply_with_chop(p, 0.0);
    let c = image.coeff(lead.0, lead.1);
    if c == 0.0 || !c.is_finite() {
        return Err(Error::InternalDispatch(format!(
            "leading coefficient vanished under {map}"
        )));
    }
    Ok((image.scale(1.0 / c), c))
}

/// Removes the quadratic terms of a mid form as far as its block allows.
pub fn reduce_high(m: &MidForm, eps: f64) -> Result<(ReducedForm, Step)> {
    use CanonicalCubicForm::*;
    let (e, f, g) = (m.e, m.f, m.g);
    let mut guards = Guards::new(eps);
    let raw = AffineMap::raw;
    let (table, case, kind, map) = match m.form {
        XXY2_PLUS => {
            let k = e - 3.0 * g;
            if !guards.zero("E-3G", k, e.abs().max(3.0 * g.abs())) {
                ("high x^3+xy^2", "E != 3G", ReducedKind::K1, raw(k, 0.0, -g, 0.0, k, -f / 2.0))
            } else {
                ("high x^3+xy^2", "E = 3G", ReducedKind::K2, raw(1.0, 0.0, -g, 0.0, 1.0, -f / 2.0))
            }
        }
        XXY2_MINUS => {
            let k = -e / 3.0 - g;
            if !guards.zero("E+3G", e + 3.0 * g, e.abs().max(3.0 * g.abs())) {
                ("high x^3-xy^2", "E != -3G", ReducedKind::K4, raw(k, 0.0, -e / 3.0, 0.0, k, f / 2.0))
            } else {
                ("high x^3-xy^2", "E = -3G", ReducedKind::K3, raw(1.0, 0.0, -e / 3.0, 0.0, 1.0, f / 2.0))
            }
        }
        X2Y => {
            if !guards.zero("G", g, 0.0) {
                ("high x^2y", "G != 0", ReducedKind::K5, raw(1.0, 0.0, -f / 2.0, 0.0, 1.0 / g, -e))
            } else {
                ("high x^2y", "G = 0", ReducedKind::K6, raw(1.0, 0.0, -f / 2.0, 0.0, 1.0, -e))
            }
        }
        X3 => {
            if !guards.zero("G", g, 0.0) {
                let s = guards.sigma(-g);
                let map = raw(
                    s,
                    0.0,
                    (f * f - 4.0 * e * g) / (12.0 * g),
                    f / (2.0 * g.abs()),
                    1.0 / g.abs().sqrt(),
                    0.0,
                );
                ("high x^3", "G != 0", ReducedKind::K7, map)
            } else if !guards.zero("F", f, 0.0) {
                ("high x^3", "G = 0, F != 0", ReducedKind::K8, raw(1.0, 0.0, -e / 3.0, 0.0, -1.0 / f, 0.0))
            } else {
                ("high x^3", "G = F = 0", ReducedKind::K9, raw(1.0, 0.0, -e / 3.0, 0.0, 1.0, 0.0))
            }
        }
    };
    let (image, c) = apply_normalized(&m.polynomial(), &map, kind.leading_exponent())?;
    let reduced = ReducedForm {
        kind,
        c,
        h: image.coeff(1, 0),
        i: image.coeff(0, 1),
        j: image.coeff(0, 0),
    };
    let step = Step {
        table,
        case,
        map,
        scalars: Vec::new(),
        guards: guards.seen,
    };
    Ok((reduced, step))
}

/// How the family of a low-table row is determined.
enum Target {
    Fixed(FamilyId),
    /// Chosen by the sign of the coefficient at the exponent.
    Signed((u32, u32), FamilyId, FamilyId),
}

/// Result of a low table: the family, the row map and its scale.
#[derive(Clone, Debug, PartialEq)]
pub struct LowReduction {
    pub family: FamilyId,
    pub params: Params,
    pub scale: f64,
    pub step: Step,
}

/// Normalizes `H`, `I`, `J` of a reduced form to a catalogue row.
pub fn reduce_low(r: &ReducedForm, eps: f64) -> Result<LowReduction> {
    use FamilyId::*;
    use ReducedKind::*;
    let (h, i, j) = (r.h, r.i, r.j);
    let mut g = Guards::new(eps);
    let raw = AffineMap::raw;
    let id = AffineMap::identity();
    let mut scalars = Vec::new();
    let scaled = |k: f64| raw(k, 0.0, 0.0, 0.0, k, 0.0);

    let (table, case, map, target) = match r.kind {
        K1 => (
            "low x^3+xy^2+x^2",
            "any",
            raw(1.0, 0.0, 0.0, 0.0, g.sigma(i), 0.0),
            Target::Fixed(X3_P_XY2_P_X2_HIJ),
        ),
        K2 => {
            let t = "low x^3+xy^2";
            if !g.zero("I", i, 0.0) {
                let (s, k) = (g.sigma(j), i.abs().sqrt());
                (t, "I != 0", raw(s * k, 0.0, 0.0, 0.0, s * g.sigma(i) * k, 0.0), Target::Fixed(X3_P_XY2_P_Y_HJ))
            } else if !g.zero("H", h, 0.0) {
                let k = g.sigma(j) * h.abs().sqrt();
                (t, "I = 0, H != 0", scaled(k), Target::Signed((1, 0), X3_P_XY2_P_X_J, X3_P_XY2_M_X_J))
            } else if !g.zero("J", j, 0.0) {
                (t, "I = H = 0, J != 0", scaled(j.cbrt()), Target::Fixed(X3_P_XY2_P_1))
            } else {
                (t, "I = H = J = 0", id, Target::Fixed(X3_P_XY2))
            }
        }
        K3 => {
            let t = "low x^3-xy^2";
            if !g.zero("I", i, 0.0) {
                let (s, k) = (g.sigma(j), i.abs().sqrt());
                if !g.positive("|H|-|I|", h.abs() - i.abs(), h.abs()) {
                    let map = raw(s * k, 0.0, 0.0, 0.0, s * g.sigma(-i) * k, 0.0);
                    (t, "I != 0, |H| <= |I|", map, Target::Fixed(X3_M_XY2_M_Y_HJ))
                } else {
                    let alpha = -((h.abs() + i.abs()) / (8.0 * i.abs())).sqrt();
                    scalars.push(("alpha", alpha));
                    let b = alpha * k * s;
                    let e = g.sigma(h);
                    let ih = g.sigma(i) * e;
                    let map = raw(b, b * e, 0.0, -3.0 * b * ih, b * ih * e, 0.0);
                    (t, "I != 0, |H| > |I|", map, Target::Fixed(X3_M_XY2_M_Y_HJ))
                }
            } else if !g.zero("H", h, 0.0) {
                let beta = -(h.abs() / 8.0).sqrt();
                scalars.push(("beta", beta));
                let b = beta * g.sigma(j);
                let e = g.sigma(h);
                let map = raw(b, b * e, 0.0, 3.0 * b, -b * e, 0.0);
                (t, "I = 0, H != 0", map, Target::Fixed(X3_M_XY2_M_Y_HJ))
            } else if !g.zero("J", j, 0.0) {
                (t, "I = H = 0, J != 0", scaled(j.cbrt()), Target::Fixed(X3_M_XY2_P_1))
            } else {
                (t, "I = H = J = 0", id, Target::Fixed(X3_M_XY2))
            }
        }
        K4 => {
            let t = "low x^3-xy^2-y^2";
            let d = h + 0.75;
            let a = i.abs();
            let s = g.sigma(i);
            let mag = a.max(d.abs());
            if g.positive("|I|-|H+3/4|", a - d.abs(), mag) {
                let map = raw(-0.5, -0.5, -0.75, -1.5 * s, 0.5 * s, -0.75 * s);
                (t, "|H+3/4| < |I|", map, Target::Fixed(X3_M_XY2_M_Y2_HIJ))
            } else if !g.positive("|I|-(H+3/4)", a - d, mag) {
                let map = raw(-0.5, 0.5, -0.75, -1.5 * s, -0.5 * s, -0.75 * s);
                (t, "H+3/4 >= |I|", map, Target::Fixed(X3_M_XY2_M_Y2_HIJ))
            } else {
                (t, "H+3/4 <= -|I|", raw(1.0, 0.0, 0.0, 0.0, s, 0.0), Target::Fixed(X3_M_XY2_M_Y2_HIJ))
            }
        }
        K5 => {
            let t = "low x^2y+y^2";
            if !g.zero("H", h, 0.0) {
                let c = h.cbrt();
                (t, "H != 0", raw(-c, 0.0, 0.0, 0.0, c * c, 0.0), Target::Fixed(X2Y_P_Y2_M_X_IJ))
            } else if !g.zero("I", i, 0.0) {
                let k = i.abs();
                (
                    t,
                    "H = 0, I != 0",
                    raw(k.sqrt(), 0.0, 0.0, 0.0, k, 0.0),
                    Target::Signed((0, 1), X2Y_P_Y2_P_Y_J, X2Y_P_Y2_M_Y_J),
                )
            } else if !g.zero("J", j, 0.0) {
                let k = j.abs();
                (
                    t,
                    "H = I = 0, J != 0",
                    raw(k.powf(0.25), 0.0, 0.0, 0.0, k.sqrt(), 0.0),
                    Target::Signed((0, 0), X2Y_P_Y2_P_1, X2Y_P_Y2_M_1),
                )
            } else {
                (t, "H = I = J = 0", id, Target::Fixed(X2Y_P_Y2))
            }
        }
        K6 => {
            let t = "low x^2y";
            let hz = g.zero("H", h, 0.0);
            let iz = g.zero("I", i, 0.0);
            let jz = g.zero("J", j, 0.0);
            match (hz, iz, jz) {
                (false, false, _) => {
                    let s = if jz { 1.0 } else { -g.sigma(h) * g.sigma(j) };
                    let k = i.abs().sqrt();
                    (
                        t,
                        "HI != 0",
                        raw(s * k, 0.0, 0.0, 0.0, -s * h / k, 0.0),
                        Target::Signed((0, 1), X2Y_M_X_P_Y_J, X2Y_M_X_M_Y_J),
                    )
                }
                (false, true, false) => (
                    t,
                    "HJ != 0, I = 0",
                    raw(-j / h, 0.0, 0.0, 0.0, h * h / j, 0.0),
                    Target::Fixed(X2Y_M_X_P_1),
                ),
                (false, true, true) => (
                    t,
                    "H != 0, I = J = 0",
                    raw(1.0, 0.0, 0.0, 0.0, -h, 0.0),
                    Target::Fixed(X2Y_M_X),
                ),
                (true, false, false) => (
                    t,
                    "H = 0, IJ != 0",
                    raw(i.abs().sqrt(), 0.0, 0.0, 0.0, j / i.abs(), 0.0),
                    Target::Signed((0, 1), X2Y_P_Y_P_1, X2Y_M_Y_P_1),
                ),
                (true, false, true) => (
                    t,
                    "H = J = 0, I != 0",
                    raw(i.abs().sqrt(), 0.0, 0.0, 0.0, 1.0, 0.0),
                    Target::Signed((0, 1), X2Y_P_Y, X2Y_M_Y),
                ),
                (true, true, false) => (
                    t,
                    "H = I = 0, J != 0",
                    raw(1.0, 0.0, 0.0, 0.0, -j, 0.0),
                    Target::Fixed(X2Y_M_1),
                ),
                (true, true, true) => (t, "H = I = J = 0", id, Target::Fixed(X2Y)),
            }
        }
        K7 => {
            let t = "low x^3-y^2";
            let kk = i * i / 4.0 + j;
            if !g.zero("H", h, 0.0) {
                let a = h.abs();
                (
                    t,
                    "H != 0",
                    raw(a.sqrt(), 0.0, 0.0, 0.0, a.powf(0.75), i / 2.0),
                    Target::Signed((1, 0), X3_M_Y2_P_X_J, X3_M_Y2_M_X_J),
                )
            } else if !g.zero("I^2/4+J", kk, (i * i / 4.0).max(j.abs())) {
                let a = kk.abs();
                (
                    t,
                    "H = 0, I^2/4+J != 0",
                    raw(a.cbrt(), 0.0, 0.0, 0.0, a.sqrt(), i / 2.0),
                    Target::Signed((0, 0), X3_M_Y2_P_1, X3_M_Y2_M_1),
                )
            } else {
                (t, "H = 0, I^2/4+J = 0", raw(1.0, 0.0, 0.0, 0.0, 1.0, i / 2.0), Target::Fixed(X3_M_Y2))
            }
        }
        K8 => {
            let t = "low x^3-xy";
            let gamma = i.powi(3) + i * h + j;
            scalars.push(("gamma", gamma));
            let mag = i.abs().powi(3).max((i * h).abs()).max(j.abs());
            if !g.zero("gamma", gamma, mag) {
                let c = gamma.cbrt();
                let map = raw(c, 0.0, i, 3.0 * c * i, c * c, 3.0 * i * i + h);
                (t, "gamma != 0", map, Target::Fixed(X3_M_XY_P_1))
            } else {
                let map = raw(1.0, 0.0, i, 3.0 * i, 1.0, 3.0 * i * i + h);
                (t, "gamma = 0", map, Target::Fixed(X3_M_XY))
            }
        }
        K9 => {
            let t = "low x^3";
            if !g.zero("I", i, 0.0) {
                (t, "I != 0", raw(1.0, 0.0, 0.0, -h / i, -1.0 / i, -j / i), Target::Fixed(X3_M_Y))
            } else if !g.zero("H", h, 0.0) {
                let k = g.sigma(j) * h.abs().sqrt();
                (
                    t,
                    "I = 0, H != 0",
                    raw(k, 0.0, 0.0, 0.0, 1.0, 0.0),
                    Target::Signed((1, 0), X3_P_X_J, X3_M_X_J),
                )
            } else if !g.zero("J", j, 0.0) {
                (t, "I = H = 0, J != 0", raw(j.cbrt(), 0.0, 0.0, 0.0, 1.0, 0.0), Target::Fixed(X3_P_1))
            } else {
                (t, "I = H = J = 0", id, Target::Fixed(X3))
            }
        }
    };

    let (image, scale) = apply_normalized(&r.polynomial(), &map, r.kind.leading_exponent())?;
    let family = match target {
        Target::Fixed(f) => f,
        Target::Signed((a, b), plus, minus) => {
            let v = image.coeff(a, b);
            if (v.abs() - 1.0).abs() > 1e-6 {
                return Err(Error::InternalDispatch(format!(
                    "{table}, case {case}: expected a unit coefficient, got {v}"
                )));
            }
            if v > 0.0 {
                plus
            } else {
                minus
            }
        }
    };
    let params = family.snap(family.restrict(
        image.coeff(1, 0),
        image.coeff(0, 1),
        image.coeff(0, 0),
    ));
    let violation = family.constraint_violation(&params);
    if violation > 0.0 {
        return Err(Error::InternalDispatch(format!(
            "{table}, case {case}: {family} constraints violated by {violation:e}"
        )));
    }
    Ok(LowReduction {
        family,
        params,
        scale,
        step: Step {
            table,
            case,
            map,
            scalars,
            guards: g.seen,
        },
    })
}

/// Relative residual `max|compose(f, w) - scale * g| / max|f|`.
pub fn verify(f: &Poly2, w: &AffineMap, scale: f64, g: &Poly2) -> f64 {
    let image = w.apply_with_chop(f, 0.0);
    let diff = image.max_abs_diff(&g.scale(scale));
    let norm = f.max_abs();
    if norm > 0.0 {
        diff / norm
    } else {
        diff
    }
}

/// Classifies a cubic with default tolerances.
pub fn classify(f: &Poly2) -> Result<ClassificationResult> {
    classify_with(f, &Tolerances::default())
}

pub fn classify_with(f: &Poly2, tol: &Tolerances) -> Result<ClassificationResult> {
    // The input is used as given; only derived images are chopped.
    let (mid, red) = to_mid_form_with(f, tol.chop)?;
    let (reduced, high) = reduce_high(&mid, tol.case)?;
    let low = reduce_low(&reduced, tol.case)?;

    let cubic_step = Step {
        table: "cubic form",
        case: red.form.tag(),
        map: red.linmap,
        scalars: Vec::new(),
        guards: Vec::new(),
    };
    let trace = StepTrace {
        steps: vec![cubic_step, high, low.step],
    };
    let witness = trace.composed();
    let scale = red.scale * reduced.c * low.scale;
    let params = low.params;
    let residual = verify(f, &witness, scale, &low.family.polynomial(&params));
    let canonical = low.family.polynomial(&params);
    if !(residual <= tol.residual) {
        return Err(Error::ResidualTooLarge {
            residual,
            bound: tol.residual,
        });
    }
    Ok(ClassificationResult {
        family: low.family,
        params,
        witness,
        scale,
        residual,
        canonical,
        trace,
    })
}

/// Smallest violation tolerated when checking parameters of a result.
pub fn constraints_hold(family: FamilyId, params: &Params) -> bool {
    family.constraint_violation(params) <= CONSTRAINT_TOL
}
