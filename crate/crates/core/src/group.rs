//! Affine maps, tame automorphisms and seeded samplers.
//!
//! Maps act on polynomials by substitution: applying `⟨p, q⟩` to `f` gives
//! `f(p, q)`. Composition follows ring-map order, so
//! `apply(f, compose(outer, inner)) == apply(apply(f, inner), outer)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Poly2, SubstitutionMap};

/// Smallest admissible `|det|` for an affine map.
pub const MIN_DET: f64 = 1e-12;

/// `⟨A x + B y + R, C x + D y + S⟩` with `AD - BC != 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "S")]
    pub s: f64,
}

impl AffineMap {
    pub fn new(a: f64, b: f64, r: f64, c: f64, d: f64, s: f64) -> Result<Self> {
        let m = Self { a, b, r, c, d, s };
        if m.det().abs() < MIN_DET || !m.det().is_finite() {
            return Err(Error::SingularMap(m.det()));
        }
        Ok(m)
    }

    /// Constructor for maps that are invertible by construction (table maps
    /// with nonzero radicals). Does not check the determinant.
    pub(crate) fn raw(a: f64, b: f64, r: f64, c: f64, d: f64, s: f64) -> Self {
        Self { a, b, r, c, d, s }
    }

    pub fn identity() -> Self {
        Self::raw(1.0, 0.0, 0.0, 0.0, 1.0, 0.0)
    }

    pub fn linear(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::new(a, b, 0.0, c, d, 0.0)
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn is_linear(&self) -> bool {
        self.r == 0.0 && self.s == 0.0
    }

    pub fn to_substitution(&self) -> SubstitutionMap {
        let p = Poly2::from_terms([(1, 0, self.a), (0, 1, self.b), (0, 0, self.r)]);
        let q = Poly2::from_terms([(1, 0, self.c), (0, 1, self.d), (0, 0, self.s)]);
        SubstitutionMap::new(p, q)
    }

    pub fn apply(&self, f: &Poly2) -> Poly2 {
        f.compose(&self.to_substitution())
    }

    pub fn apply_with_chop(&self, f: &Poly2, eps: f64) -> Poly2 {
        f.compose_with_chop(&self.to_substitution(), eps)
    }

    /// The point map `(x, y) -> (Ax + By + R, Cx + Dy + S)`.
    pub fn map_point(&self, x: f64, y: f64) -> (f64, f64) {
        (
            self.a * x + self.b * y + self.r,
            self.c * x + self.d * y + self.s,
        )
    }

    /// `outer ∘ inner`: the substitution that applies `inner` first.
    pub fn compose(outer: &Self, inner: &Self) -> Self {
        // Point maps compose the other way round: inner.point ∘ outer.point.
        Self::raw(
            inner.a * outer.a + inner.b * outer.c,
            inner.a * outer.b + inner.b * outer.d,
            inner.a * outer.r + inner.b * outer.s + inner.r,
            inner.c * outer.a + inner.d * outer.c,
            inner.c * outer.b + inner.d * outer.d,
            inner.c * outer.r + inner.d * outer.s + inner.s,
        )
    }

    /// Applies `self` first, then `next`.
    pub fn then(&self, next: &Self) -> Self {
        Self::compose(next, self)
    }

    pub fn invert(&self) -> Result<Self> {
        let det = self.det();
        if det.abs() < MIN_DET || !det.is_finite() {
            return Err(Error::SingularMap(det));
        }
        let (a, b, c, d) = (self.d / det, -self.b / det, -self.c / det, self.a / det);
        Ok(Self::raw(
            a,
            b,
            -(a * self.r + b * self.s),
            c,
            d,
            -(c * self.r + d * self.s),
        ))
    }

    /// Largest absolute difference between corresponding coefficients.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        [
            self.a - other.a,
            self.b - other.b,
            self.r - other.r,
            self.c - other.c,
            self.d - other.d,
            self.s - other.s,
        ]
        .iter()
        .fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl std::fmt::Display for AffineMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_substitution())
    }
}

/// Uniform affine map with coefficients in `[-range, range]`, resampled until
/// `|det| >= 0.1 * range^2`.
pub fn sample_affine(seed: u64, range: f64) -> Result<AffineMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_affine_with(&mut rng, range)
}

pub fn sample_affine_with<R: Rng>(rng: &mut R, range: f64) -> Result<AffineMap> {
    if !(range > 0.0) || !range.is_finite() {
        return Err(Error::InvalidRange(range));
    }
    loop {
        let mut v = [0.0; 6];
        for x in &mut v {
            *x = rng.gen_range(-range..=range);
        }
        let m = AffineMap::raw(v[0], v[1], v[2], v[3], v[4], v[5]);
        if m.det().abs() >= 0.1 * range * range {
            return Ok(m);
        }
    }
}

/// One generator of a tame automorphism.
#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    Affine(AffineMap),
    /// `⟨x + h(y), y⟩`; `h` holds ascending coefficients.
    ShearX(Vec<f64>),
    /// `⟨x, y + h(x)⟩`.
    ShearY(Vec<f64>),
}

fn univariate(h: &[f64], var: Poly2) -> Poly2 {
    let mut acc = Poly2::zero();
    for &c in h.iter().rev() {
        acc = acc.mul(&var).add(&Poly2::constant(c));
    }
    acc
}

impl Generator {
    pub fn to_substitution(&self) -> SubstitutionMap {
        match self {
            Generator::Affine(m) => m.to_substitution(),
            Generator::ShearX(h) => {
                SubstitutionMap::new(Poly2::x().add(&univariate(h, Poly2::y())), Poly2::y())
            }
            Generator::ShearY(h) => {
                SubstitutionMap::new(Poly2::x(), Poly2::y().add(&univariate(h, Poly2::x())))
            }
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(match self {
            Generator::Affine(m) => Generator::Affine(m.invert()?),
            Generator::ShearX(h) => Generator::ShearX(h.iter().map(|c| -c).collect()),
            Generator::ShearY(h) => Generator::ShearY(h.iter().map(|c| -c).collect()),
        })
    }
}

/// A product of affine and triangular generators, applied in list order.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct TameMap {
    pub generators: Vec<Generator>,
}

impl TameMap {
    pub fn new(generators: Vec<Generator>) -> Self {
        Self { generators }
    }

    /// The substitution `g_n ∘ ... ∘ g_1`, so that composing `f` with it
    /// applies `g_1` first. Components are expanded without chopping.
    pub fn realize(&self) -> SubstitutionMap {
        self.generators
            .iter()
            .fold(SubstitutionMap::identity(), |acc, g| {
                let s = g.to_substitution();
                SubstitutionMap::new(
                    acc.p.compose_with_chop(&s, 0.0),
                    acc.q.compose_with_chop(&s, 0.0),
                )
            })
    }

    pub fn inverse(&self) -> Result<Self> {
        let generators = self
            .generators
            .iter()
            .rev()
            .map(Generator::inverse)
            .collect::<Result<_>>()?;
        Ok(Self { generators })
    }

    pub fn apply(&self, f: &Poly2) -> Poly2 {
        f.compose(&self.realize())
    }
}

/// A sampled tame map together with its materialized inverse.
#[derive(Clone, Debug)]
pub struct SampledTame {
    pub map: TameMap,
    pub inverse: TameMap,
    pub realized: SubstitutionMap,
    pub realized_inverse: SubstitutionMap,
}

/// Random alternating product of unimodular integer affine maps and
/// triangular maps with integer coefficients in `[-3, 3]`.
pub fn sample_tame(seed: u64, max_generators: usize, max_h_degree: usize) -> SampledTame {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = if max_generators == 0 {
        0
    } else {
        rng.gen_range(1..=max_generators)
    };
    let mut generators = Vec::with_capacity(count);
    let start_affine: bool = rng.gen();
    for k in 0..count {
        if (k % 2 == 0) == start_affine {
            generators.push(Generator::Affine(sample_unimodular(&mut rng)));
        } else {
            let deg = rng.gen_range(0..=max_h_degree);
            let h: Vec<f64> = (0..=deg).map(|_| rng.gen_range(-3..=3) as f64).collect();
            if rng.gen() {
                generators.push(Generator::ShearX(h));
            } else {
                generators.push(Generator::ShearY(h));
            }
        }
    }
    let map = TameMap::new(generators);
    let inverse = map.inverse().expect("unimodular generators are invertible");
    SampledTame {
        realized: map.realize(),
        realized_inverse: inverse.realize(),
        map,
        inverse,
    }
}

fn sample_unimodular<R: Rng>(rng: &mut R) -> AffineMap {
    loop {
        let v: Vec<f64> = (0..4).map(|_| rng.gen_range(-3..=3) as f64).collect();
        let det = v[0] * v[3] - v[1] * v[2];
        if det.abs() == 1.0 {
            let r = rng.gen_range(-3..=3) as f64;
            let s = rng.gen_range(-3..=3) as f64;
            return AffineMap::raw(v[0], v[1], r, v[2], v[3], s);
        }
    }
}

/// Outcome of one row of the minimal-degree representative table.
#[derive(Clone, Debug, PartialEq)]
pub struct AutDegRow {
    pub source: Poly2,
    pub map: SubstitutionMap,
    pub expected: Poly2,
    pub image: Poly2,
    pub pass: bool,
}

/// Checks the three cubics whose automorphic orbit contains a polynomial of
/// degree below three, with exact coefficient equality.
pub fn check_autdeg_table() -> Vec<AutDegRow> {
    let x = Poly2::x();
    let y = Poly2::y();
    let one = Poly2::constant(1.0);
    let x3 = x.pow(3);
    let xy = x.mul(&y);
    let cube_map = SubstitutionMap::new(y.clone(), y.pow(3).sub(&x));
    let square_map = SubstitutionMap::new(y.clone(), y.pow(2).sub(&x));
    let rows = [
        (x3.sub(&y), cube_map, x.clone()),
        (x3.sub(&xy), square_map.clone(), xy.clone()),
        (x3.sub(&xy).add(&one), square_map, xy.add(&one)),
    ];
    rows.into_iter()
        .map(|(source, map, expected)| {
            let image = source.compose(&map);
            AutDegRow {
                pass: image == expected,
                source,
                map,
                expected,
                image,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    #[test]
    fn identity_composition() {
        let id = AffineMap::identity();
        assert_eq!(AffineMap::compose(&id, &id), id);
    }

    #[test]
    fn composition_matches_sequential_application() {
        let outer = AffineMap::new(3.0, 0.0, 0.0, 0.0, 3.0, 0.0).unwrap();
        let inner = AffineMap::new(1.0, 0.0, -1.0, 0.0, 1.0, 0.0).unwrap();
        let f = parse_poly("x^3 - 2*x*y + y^2 - 5").unwrap();
        let direct = AffineMap::compose(&outer, &inner).apply(&f);
        let sequential = outer.apply(&inner.apply(&f));
        assert!(direct.max_abs_diff(&sequential) < 1e-12);
        // ⟨x - 1, y⟩ with ⟨3x, 3y⟩ substituted gives ⟨3x - 1, 3y⟩.
        let c = AffineMap::compose(&outer, &inner);
        assert_eq!((c.a, c.r, c.d), (3.0, -1.0, 3.0));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(AffineMap::identity().invert().unwrap(), AffineMap::identity());
        let m = AffineMap::linear(2.0, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(m.invert().unwrap(), AffineMap::linear(0.5, 0.0, 0.0, 1.0).unwrap());
        let m = AffineMap::linear(1.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(m.invert().unwrap(), AffineMap::linear(1.0, -1.0, 0.0, 1.0).unwrap());
        let m = AffineMap::new(1.5, -2.0, 0.3, 0.7, 4.0, -1.0).unwrap();
        let round = AffineMap::compose(&m, &m.invert().unwrap());
        assert!(round.max_abs_diff(&AffineMap::identity()) < 1e-12);
    }

    #[test]
    fn singular_maps_are_rejected() {
        assert!(matches!(
            AffineMap::linear(1.0, 2.0, 2.0, 4.0),
            Err(Error::SingularMap(_))
        ));
        let raw = AffineMap::raw(1.0, 2.0, 0.0, 2.0, 4.0, 0.0);
        assert!(raw.invert().is_err());
    }

    #[test]
    fn affine_sampling_is_seeded_and_bounded() {
        let a = sample_affine(1, 3.0).unwrap();
        let b = sample_affine(1, 3.0).unwrap();
        assert_eq!(a, b);
        for seed in 0..200 {
            let m = sample_affine(seed, 2.0).unwrap();
            assert!(m.det().abs() >= 0.4);
            for v in [m.a, m.b, m.r, m.c, m.d, m.s] {
                assert!(v.abs() <= 2.0);
            }
        }
        assert!(matches!(sample_affine(1, 0.0), Err(Error::InvalidRange(_))));
    }

    #[test]
    fn single_shear_inverts_exactly() {
        let t = TameMap::new(vec![Generator::ShearY(vec![0.0, 0.0, 1.0])]);
        let f = parse_poly("x^3 - 2*x*y + 7").unwrap();
        let image = t.apply(&f);
        assert_eq!(image, parse_poly("x^3 - 2*x*(y + x^2) + 7").unwrap());
        assert_eq!(t.inverse().unwrap().apply(&image), f);
    }

    #[test]
    fn swap_then_shear_realizes_square_map() {
        let swap = AffineMap::linear(0.0, 1.0, 1.0, 0.0).unwrap();
        let neg_x = AffineMap::linear(-1.0, 0.0, 0.0, 1.0).unwrap();
        let t = TameMap::new(vec![
            Generator::Affine(swap),
            Generator::ShearX(vec![0.0, 0.0, 1.0]),
            Generator::Affine(neg_x),
        ]);
        let realized = t.realize();
        assert_eq!(realized.p, Poly2::y());
        assert_eq!(realized.q, parse_poly("y^2 - x").unwrap());
        let f = parse_poly("x^3 - x*y + 1").unwrap();
        assert_eq!(t.apply(&f), parse_poly("x*y + 1").unwrap());
    }

    #[test]
    fn empty_tame_map_is_identity() {
        let t = TameMap::default();
        assert_eq!(t.realize(), SubstitutionMap::identity());
        let s = sample_tame(5, 0, 3);
        assert_eq!(s.realized, SubstitutionMap::identity());
    }

    fn l1(p: &Poly2) -> f64 {
        p.terms().map(|(_, c)| c.abs()).sum()
    }

    /// Bound on every partial sum formed while expanding `f(p, q)`.
    fn composition_bound(f: &Poly2, s: &SubstitutionMap) -> f64 {
        let (np, nq) = (l1(&s.p), l1(&s.q));
        f.terms()
            .map(|((i, j), c)| c.abs() * np.powi(i as i32) * nq.powi(j as i32))
            .sum()
    }

    #[test]
    fn sampled_tame_maps_invert_exactly() {
        let f = parse_poly("x^3 - x*y^2 + 2*y - 3").unwrap();
        let exact = 2f64.powi(53);
        let mut checked = 0;
        for seed in 0..200 {
            let t = sample_tame(seed, 4, 3);
            let image = f.compose_with_chop(&t.realized, 0.0);
            if composition_bound(&f, &t.realized) >= exact
                || composition_bound(&image, &t.realized_inverse) >= exact
            {
                continue;
            }
            let back = image.compose_with_chop(&t.realized_inverse, 0.0);
            assert_eq!(back, f, "seed {seed}: {}", t.realized);
            checked += 1;
        }
        assert!(checked >= 50, "only {checked} samples within exact range");
    }

    #[test]
    fn autdeg_rows_pass() {
        let rows = check_autdeg_table();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.pass));
    }
}
