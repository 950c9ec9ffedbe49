//! Univariate root finding.
//!
//! All roots of a polynomial are found at once with the Aberth–Ehrlich
//! simultaneous iteration and then polished individually with Newton steps.
//! Coefficient slices are in ascending order: `c[0] + c[1] t + c[2] t^2 + ...`.

use num_complex::Complex64;

const MAX_ITER: usize = 500;

/// Strips trailing coefficients that are zero relative to the largest one.
fn trim(coeffs: &[Complex64], rel: f64) -> Vec<Complex64> {
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
    let mut v = coeffs.to_vec();
    while let Some(last) = v.last() {
        if last.norm() <= rel * scale {
            v.pop();
        } else {
            break;
        }
    }
    v
}

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All complex roots of a polynomial with complex coefficients.
///
/// Leading coefficients that are zero up to `1e-14` relative are dropped
/// first, so the number of returned roots is the effective degree. The zero
/// polynomial and nonzero constants have no roots.
pub fn complex_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let c = trim(coeffs, 1e-14);
    if c.len() <= 1 {
        return Vec::new();
    }
    // Factor out roots at zero exactly.
    let zeros = c.iter().take_while(|z| z.norm() == 0.0).count();
    let c = &c[zeros..];
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    let n = c.len() - 1;
    if n == 0 {
        return roots;
    }
    if n == 1 {
        roots.push(-c[0] / c[1]);
        return roots;
    }

    let lead = c[n];
    let monic: Vec<Complex64> = c.iter().map(|&a| a / lead).collect();

    // Initial guesses on a circle whose radius is the Cauchy-type bound
    // estimate; the angular offset avoids symmetric stalls.
    let radius = monic[..n]
        .iter()
        .enumerate()
        .map(|(k, a)| a.norm().powf(1.0 / (n - k) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, angle)
        })
        .collect();

    for _ in 0..MAX_ITER {
        let mut max_step = 0.0f64;
        for k in 0..n {
            let (p, dp) = horner(&monic, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut repulsion = Complex64::new(0.0, 0.0);
            for (m, &zm) in z.iter().enumerate() {
                if m != k {
                    let d = z[k] - zm;
                    if d.norm() > 0.0 {
                        repulsion += d.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - ratio * repulsion;
            let step = if denom.norm() > 0.0 { ratio / denom } else { ratio };
            if step.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    for zk in &mut z {
        *zk = newton_polish(&monic, *zk);
    }
    roots.extend(z);
    roots
}

/// All complex roots of a polynomial with real coefficients.
pub fn complex_roots_real(coeffs: &[f64]) -> Vec<Complex64> {
    let c: Vec<Complex64> = coeffs.iter().map(|&a| Complex64::new(a, 0.0)).collect();
    complex_roots(&c)
}

/// Newton iteration from `z`, keeping the best iterate seen.
pub fn newton_polish(coeffs: &[Complex64], mut z: Complex64) -> Complex64 {
    let mut best = z;
    let mut best_val = horner(coeffs, z).0.norm();
    for _ in 0..20 {
        let (p, dp) = horner(coeffs, z);
        if p.norm() == 0.0 || dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        z -= step;
        let val = horner(coeffs, z).0.norm();
        if val < best_val {
            best = z;
            best_val = val;
        }
        if step.norm() <= 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    best
}

/// Real Newton polish for a real polynomial.
pub fn newton_polish_real(coeffs: &[f64], mut t: f64) -> f64 {
    let eval = |t: f64| {
        let mut p = 0.0;
        let mut dp = 0.0;
        for &c in coeffs.iter().rev() {
            dp = dp * t + p;
            p = p * t + c;
        }
        (p, dp)
    };
    let mut best = t;
    let mut best_val = eval(t).0.abs();
    for _ in 0..20 {
        let (p, dp) = eval(t);
        if p == 0.0 || dp == 0.0 {
            break;
        }
        let step = p / dp;
        t -= step;
        let val = eval(t).0.abs();
        if val < best_val {
            best = t;
            best_val = val;
        }
        if step.abs() <= 1e-16 * (1.0 + t.abs()) {
            break;
        }
    }
    best
}

/// Univariate polynomial with real coefficients, ascending order. Used for
/// resultant computations.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly(pub Vec<f64>);

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly(Vec::new())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let v = (0..n)
            .map(|k| self.0.get(k).copied().unwrap_or(0.0) + other.0.get(k).copied().unwrap_or(0.0))
            .collect();
        UniPoly(v)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, k: f64) -> Self {
        UniPoly(self.0.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.0.is_empty() || other.0.is_empty() {
            return Self::zero();
        }
        let mut v = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        UniPoly(v)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.0
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }
}

/// Determinant of a small square matrix of univariate polynomials, by
/// cofactor expansion along the first row.
pub fn poly_determinant(m: &[Vec<UniPoly>]) -> UniPoly {
    let n = m.len();
    match n {
        0 => UniPoly(vec![1.0]),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = UniPoly::zero();
            for col in 0..n {
                if m[0][col].0.iter().all(|&c| c == 0.0) {
                    continue;
                }
                let minor: Vec<Vec<UniPoly>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != col)
                            .map(|(_, e)| e.clone())
                            .collect()
                    })
                    .collect();
                let term = m[0][col].mul(&poly_determinant(&minor));
                acc = if col % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}
