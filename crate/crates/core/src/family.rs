//! The catalogue of affine normal forms.
//!
//! Each [`FamilyId`] is one row of the classification table, with rows
//! written `±` split into one family per sign. A family is a template
//! polynomial whose coefficients are either fixed numbers or the free
//! parameters `H`, `I`, `J`, plus the constraints on those parameters.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cubic_form::CanonicalCubicForm;
use crate::poly::Poly2;

/// Tolerance for constraint checks and boundary snapping.
pub const CONSTRAINT_TOL: f64 = 1e-9;

/// A coefficient in a family template.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Coef {
    Fixed(f64),
    H,
    I,
    J,
}

/// The free parameters of a family; absent entries are not part of the
/// family's signature.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    #[serde(rename = "H", skip_serializing_if = "Option::is_none", default)]
    pub h: Option<f64>,
    #[serde(rename = "I", skip_serializing_if = "Option::is_none", default)]
    pub i: Option<f64>,
    #[serde(rename = "J", skip_serializing_if = "Option::is_none", default)]
    pub j: Option<f64>,
}

impl Params {
    pub fn get(&self, c: Coef) -> f64 {
        match c {
            Coef::Fixed(v) => v,
            Coef::H => self.h.unwrap_or(0.0),
            Coef::I => self.i.unwrap_or(0.0),
            Coef::J => self.j.unwrap_or(0.0),
        }
    }

    /// Largest absolute difference over the parameters present in either.
    pub fn max_abs_diff(&self, other: &Params) -> f64 {
        [(self.h, other.h), (self.i, other.i), (self.j, other.j)]
            .iter()
            .map(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => (a - b).abs(),
                (None, None) => 0.0,
                _ => f64::INFINITY,
            })
            .fold(0.0, f64::max)
    }
}

macro_rules! families {
    ($( $id:ident => $form:ident, $text:literal, [$( ($i:literal, $j:literal, $c:expr) ),*] ; )*) => {
        #[allow(non_camel_case_types)]
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum FamilyId {
            $( $id, )*
        }

        impl FamilyId {
            pub const ALL: &'static [FamilyId] = &[$( FamilyId::$id, )*];

            pub fn name(self) -> &'static str {
                match self {
                    $( FamilyId::$id => stringify!($id), )*
                }
            }

            /// The table row as text, with parameters written `H`, `I`, `J`.
            pub fn template_text(self) -> &'static str {
                match self {
                    $( FamilyId::$id => $text, )*
                }
            }

            pub fn cubic_form(self) -> CanonicalCubicForm {
                match self {
                    $( FamilyId::$id => CanonicalCubicForm::$form, )*
                }
            }

            /// Monomials `x^i y^j` with their template coefficients.
            pub fn template(self) -> &'static [(u32, u32, Coef)] {
                match self {
                    $( FamilyId::$id => &[$( ($i, $j, $c) ),*], )*
                }
            }
        }
    };
}

use Coef::{Fixed as K, H, I, J};

families! {
    X3_P_XY2_P_X2_HIJ => XXY2_PLUS, "x^3 + x*y^2 + x^2 + H*x + I*y + J",
        [(3, 0, K(1.0)), (1, 2, K(1.0)), (2, 0, K(1.0)), (1, 0, H), (0, 1, I), (0, 0, J)];
    X3_P_XY2_P_Y_HJ => XXY2_PLUS, "x^3 + x*y^2 + y + H*x + J",
        [(3, 0, K(1.0)), (1, 2, K(1.0)), (0, 1, K(1.0)), (1, 0, H), (0, 0, J)];
    X3_P_XY2_P_X_J => XXY2_PLUS, "x^3 + x*y^2 + x + J",
        [(3, 0, K(1.0)), (1, 2, K(1.0)), (1, 0, K(1.0)), (0, 0, J)];
    X3_P_XY2_M_X_J => XXY2_PLUS, "x^3 + x*y^2 - x + J",
        [(3, 0, K(1.0)), (1, 2, K(1.0)), (1, 0, K(-1.0)), (0, 0, J)];
    X3_P_XY2_P_1 => XXY2_PLUS, "x^3 + x*y^2 + 1",
        [(3, 0, K(1.0)), (1, 2, K(1.0)), (0, 0, K(1.0))];
    X3_P_XY2 => XXY2_PLUS, "x^3 + x*y^2",
        [(3, 0, K(1.0)), (1, 2, K(1.0))];

    X3_M_XY2_M_Y2_HIJ => XXY2_MINUS, "x^3 - x*y^2 - y^2 + H*x + I*y + J",
        [(3, 0, K(1.0)), (1, 2, K(-1.0)), (0, 2, K(-1.0)), (1, 0, H), (0, 1, I), (0, 0, J)];
    X3_M_XY2_M_Y_HJ => XXY2_MINUS, "x^3 - x*y^2 - y + H*x + J",
        [(3, 0, K(1.0)), (1, 2, K(-1.0)), (0, 1, K(-1.0)), (1, 0, H), (0, 0, J)];
    X3_M_XY2_P_1 => XXY2_MINUS, "x^3 - x*y^2 + 1",
        [(3, 0, K(1.0)), (1, 2, K(-1.0)), (0, 0, K(1.0))];
    X3_M_XY2 => XXY2_MINUS, "x^3 - x*y^2",
        [(3, 0, K(1.0)), (1, 2, K(-1.0))];

    X2Y_P_Y2_M_X_IJ => X2Y, "x^2*y + y^2 - x + I*y + J",
        [(2, 1, K(1.0)), (0, 2, K(1.0)), (1, 0, K(-1.0)), (0, 1, I), (0, 0, J)];
    X2Y_P_Y2_P_Y_J => X2Y, "x^2*y + y^2 + y + J",
        [(2, 1, K(1.0)), (0, 2, K(1.0)), (0, 1, K(1.0)), (0, 0, J)];
    X2Y_P_Y2_M_Y_J => X2Y, "x^2*y + y^2 - y + J",
        [(2, 1, K(1.0)), (0, 2, K(1.0)), (0, 1, K(-1.0)), (0, 0, J)];
    X2Y_P_Y2_P_1 => X2Y, "x^2*y + y^2 + 1",
        [(2, 1, K(1.0)), (0, 2, K(1.0)), (0, 0, K(1.0))];
    X2Y_P_Y2_M_1 => X2Y, "x^2*y + y^2 - 1",
        [(2, 1, K(1.0)), (0, 2, K(1.0)), (0, 0, K(-1.0))];
    X2Y_P_Y2 => X2Y, "x^2*y + y^2",
        [(2, 1, K(1.0)), (0, 2, K(1.0))];
    X2Y_M_X_P_Y_J => X2Y, "x^2*y - x + y + J",
        [(2, 1, K(1.0)), (1, 0, K(-1.0)), (0, 1, K(1.0)), (0, 0, J)];
    X2Y_M_X_M_Y_J => X2Y, "x^2*y - x - y + J",
        [(2, 1, K(1.0)), (1, 0, K(-1.0)), (0, 1, K(-1.0)), (0, 0, J)];
    X2Y_P_Y_P_1 => X2Y, "x^2*y + y + 1",
        [(2, 1, K(1.0)), (0, 1, K(1.0)), (0, 0, K(1.0))];
    X2Y_M_Y_P_1 => X2Y, "x^2*y - y + 1",
        [(2, 1, K(1.0)), (0, 1, K(-1.0)), (0, 0, K(1.0))];
    X2Y_P_Y => X2Y, "x^2*y + y",
        [(2, 1, K(1.0)), (0, 1, K(1.0))];
    X2Y_M_Y => X2Y, "x^2*y - y",
        [(2, 1, K(1.0)), (0, 1, K(-1.0))];
    X2Y_M_X_P_1 => X2Y, "x^2*y - x + 1",
        [(2, 1, K(1.0)), (1, 0, K(-1.0)), (0, 0, K(1.0))];
    X2Y_M_X => X2Y, "x^2*y - x",
        [(2, 1, K(1.0)), (1, 0, K(-1.0))];
    X2Y_M_1 => X2Y, "x^2*y - 1",
        [(2, 1, K(1.0)), (0, 0, K(-1.0))];
    X2Y => X2Y, "x^2*y",
        [(2, 1, K(1.0))];

    X3_M_Y2_P_X_J => X3, "x^3 - y^2 + x + J",
        [(3, 0, K(1.0)), (0, 2, K(-1.0)), (1, 0, K(1.0)), (0, 0, J)];
    X3_M_Y2_M_X_J => X3, "x^3 - y^2 - x + J",
        [(3, 0, K(1.0)), (0, 2, K(-1.0)), (1, 0, K(-1.0)), (0, 0, J)];
    X3_M_Y2_P_1 => X3, "x^3 - y^2 + 1",
        [(3, 0, K(1.0)), (0, 2, K(-1.0)), (0, 0, K(1.0))];
    X3_M_Y2_M_1 => X3, "x^3 - y^2 - 1",
        [(3, 0, K(1.0)), (0, 2, K(-1.0)), (0, 0, K(-1.0))];
    X3_M_Y2 => X3, "x^3 - y^2",
        [(3, 0, K(1.0)), (0, 2, K(-1.0))];
    X3_M_Y => X3, "x^3 - y",
        [(3, 0, K(1.0)), (0, 1, K(-1.0))];
    X3_M_XY_P_1 => X3, "x^3 - x*y + 1",
        [(3, 0, K(1.0)), (1, 1, K(-1.0)), (0, 0, K(1.0))];
    X3_M_XY => X3, "x^3 - x*y",
        [(3, 0, K(1.0)), (1, 1, K(-1.0))];
    X3_P_X_J => X3, "x^3 + x + J",
        [(3, 0, K(1.0)), (1, 0, K(1.0)), (0, 0, J)];
    X3_M_X_J => X3, "x^3 - x + J",
        [(3, 0, K(1.0)), (1, 0, K(-1.0)), (0, 0, J)];
    X3_P_1 => X3, "x^3 + 1",
        [(3, 0, K(1.0)), (0, 0, K(1.0))];
    X3 => X3, "x^3",
        [(3, 0, K(1.0))];
}

impl FamilyId {
    pub fn from_name(name: &str) -> Option<FamilyId> {
        Self::ALL.iter().copied().find(|f| f.name() == name)
    }

    fn has(self, c: Coef) -> bool {
        self.template().iter().any(|&(_, _, t)| t == c)
    }

    /// Which of `H`, `I`, `J` are free in this family.
    pub fn signature(self) -> (bool, bool, bool) {
        (self.has(Coef::H), self.has(Coef::I), self.has(Coef::J))
    }

    /// Keeps only the parameters in the family signature.
    pub fn restrict(self, h: f64, i: f64, j: f64) -> Params {
        let (sh, si, sj) = self.signature();
        Params {
            h: sh.then_some(h),
            i: si.then_some(i),
            j: sj.then_some(j),
        }
    }

    /// The representative polynomial for the given parameters.
    pub fn polynomial(self, p: &Params) -> Poly2 {
        let terms: Vec<(u32, u32, f64)> = self
            .template()
            .iter()
            .map(|&(i, j, c)| (i, j, p.get(c)))
            .collect();
        // Built without chopping so that tiny parameters are kept verbatim.
        let mut out = Poly2::zero();
        for (i, j, c) in terms {
            out = out.add_raw_term(i, j, c);
        }
        out
    }

    /// Largest violation of the family constraints (0 when satisfied).
    pub fn constraint_violation(self, p: &Params) -> f64 {
        use FamilyId::*;
        let neg = |v: Option<f64>| v.map_or(0.0, |v| (-v).max(0.0));
        match self {
            X3_P_XY2_P_X2_HIJ => neg(p.i),
            X3_M_XY2_M_Y2_HIJ => {
                let hi = p.h.unwrap_or(0.0) + p.i.unwrap_or(0.0);
                neg(p.i).max((hi + 0.75).max(0.0))
            }
            X3_M_XY2_M_Y_HJ => {
                let h = p.h.unwrap_or(0.0);
                neg(p.j).max((h.abs() - 1.0).max(0.0))
            }
            X3_P_XY2_P_Y_HJ | X3_P_XY2_P_X_J | X3_P_XY2_M_X_J | X2Y_M_X_P_Y_J
            | X2Y_M_X_M_Y_J | X3_P_X_J | X3_M_X_J => neg(p.j),
            _ => 0.0,
        }
    }

    /// Moves parameters within [`CONSTRAINT_TOL`] of a constraint boundary
    /// onto it.
    pub fn snap(self, mut p: Params) -> Params {
        use FamilyId::*;
        let snap_nonneg = |v: &mut Option<f64>| {
            if let Some(x) = v {
                if *x < 0.0 && *x >= -CONSTRAINT_TOL {
                    *x = 0.0;
                }
            }
        };
        match self {
            X3_P_XY2_P_X2_HIJ => snap_nonneg(&mut p.i),
            X3_M_XY2_M_Y2_HIJ => {
                snap_nonneg(&mut p.i);
                if let (Some(h), Some(i)) = (p.h.as_mut(), p.i) {
                    let excess = *h + i + 0.75;
                    if excess > 0.0 && excess <= CONSTRAINT_TOL {
                        *h = -0.75 - i;
                        // The sum can still round above zero.
                        while *h + i + 0.75 > 0.0 {
                            *h = h.next_down();
                        }
                    }
                }
            }
            X3_M_XY2_M_Y_HJ => {
                snap_nonneg(&mut p.j);
                if let Some(h) = p.h.as_mut() {
                    if h.abs() > 1.0 && h.abs() <= 1.0 + CONSTRAINT_TOL {
                        *h = h.signum();
                    }
                }
            }
            X3_P_XY2_P_Y_HJ | X3_P_XY2_P_X_J | X3_P_XY2_M_X_J | X2Y_M_X_P_Y_J
            | X2Y_M_X_M_Y_J | X3_P_X_J | X3_M_X_J => snap_nonneg(&mut p.j),
            _ => {}
        }
        p
    }

    /// The canonical polynomial printed with parameter values substituted.
    pub fn canonical_text(self, p: &Params) -> String {
        self.polynomial(p).to_string()
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    #[test]
    fn catalogue_has_one_family_per_signed_row() {
        assert_eq!(FamilyId::ALL.len(), 38);
        for form in CanonicalCubicForm::ALL {
            let n = FamilyId::ALL.iter().filter(|f| f.cubic_form() == form).count();
            let expected = match form {
                CanonicalCubicForm::XXY2_PLUS => 6,
                CanonicalCubicForm::XXY2_MINUS => 4,
                CanonicalCubicForm::X2Y => 16,
                CanonicalCubicForm::X3 => 12,
            };
            assert_eq!(n, expected, "{form}");
        }
    }

    #[test]
    fn templates_agree_with_text() {
        for &f in FamilyId::ALL {
            let p = Params {
                h: Some(0.25),
                i: Some(0.5),
                j: Some(2.0),
            };
            let text = f
                .template_text()
                .replace('H', "0.25")
                .replace('I', "0.5")
                .replace('J', "2");
            let parsed = parse_poly(&text).unwrap();
            assert_eq!(f.polynomial(&p), parsed, "{f}");
            assert_eq!(FamilyId::from_name(f.name()), Some(f));
            // The cubic part is the block's canonical form.
            assert_eq!(parsed.homogeneous_component(3).poly, f.cubic_form().polynomial());
        }
    }

    #[test]
    fn constraints_and_snapping() {
        let f = FamilyId::X3_M_XY2_M_Y2_HIJ;
        let ok = f.restrict(-2.0, 0.5, 7.0);
        assert_eq!(f.constraint_violation(&ok), 0.0);
        let bad = f.restrict(-0.5, 0.5, 0.0);
        assert!(f.constraint_violation(&bad) > 0.0);
        let near = f.restrict(-1.0, 0.25 + 5e-10, 0.0);
        let snapped = f.snap(near);
        assert_eq!(snapped.h.unwrap() + snapped.i.unwrap(), -0.75);

        let g = FamilyId::X3_P_XY2_P_X2_HIJ;
        assert_eq!(g.snap(g.restrict(1.0, -3e-12, 0.0)).i, Some(0.0));
        let m = FamilyId::X3_M_XY2_M_Y_HJ;
        assert_eq!(m.snap(m.restrict(1.0 + 1e-12, 0.0, 1.0)).h, Some(1.0));
        assert!(m.constraint_violation(&m.restrict(1.5, 0.0, 1.0)) > 0.0);
    }

    #[test]
    fn signatures() {
        assert_eq!(FamilyId::X3_P_XY2_P_X2_HIJ.signature(), (true, true, true));
        assert_eq!(FamilyId::X2Y_P_Y2_M_X_IJ.signature(), (false, true, true));
        assert_eq!(FamilyId::X3.signature(), (false, false, false));
        let p = FamilyId::X3_P_X_J.restrict(1.0, 2.0, 3.0);
        assert_eq!(p, Params { h: None, i: None, j: Some(3.0) });
    }

    #[test]
    fn snap_lands_exactly_on_boundary() {
        let f = FamilyId::X3_M_XY2_M_Y2_HIJ;
        for k in 1..200 {
            let i = k as f64 * 0.037;
            let p = f.snap(f.restrict(-0.75 - i + 1e-12, i, 0.0));
            assert_eq!(f.constraint_violation(&p), 0.0, "i = {i}");
        }
    }
}
