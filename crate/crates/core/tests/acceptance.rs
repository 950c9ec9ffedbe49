//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::panic;
use std::time::{Duration, Instant};

use cubic_canon::cubic_form::{classify_binary_cubic, CanonicalCubicForm};
use cubic_canon::family::{FamilyId, Params};
use cubic_canon::group::{check_autdeg_table, sample_affine_with, AffineMap};
use cubic_canon::invariants::{invariant_report, sing_levels_complex, InvariantReport};
use cubic_canon::normalize::{classify, classify_with, Tolerances};
use cubic_canon::{parse_poly, Poly2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Critical value of `x^3 - x` at `x = -1/sqrt(3)`, written out.
const CRIT: f64 = 0.384_900_179_459_750_5;
const TABLE_TOL: f64 = 1e-7;

struct Outcome {
    pass: bool,
    detail: String,
}

fn poly(text: &str) -> Poly2 {
    parse_poly(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn lists_match(got: &[f64], want: &[f64], tol: f64) -> bool {
    got.len() == want.len() && got.iter().zip(want).all(|(a, b)| (a - b).abs() <= tol)
}

fn with_j(text: &str, j: f64) -> Poly2 {
    poly(text).add(&Poly2::constant(j))
}

fn criterion_table() -> Outcome {
    // Sets are (cusp, isol, node, red); `None` is not checked.
    type Row = (Poly2, Vec<f64>, Vec<f64>, Option<Vec<f64>>, Vec<f64>);
    let mut rows: Vec<Row> = Vec::new();
    for j in [0.0, 1.0, -2.0] {
        rows.push((with_j("x^3 - y^2 + x", j), vec![], vec![], Some(vec![]), vec![]));
        rows.push((with_j("x^3 - y^2 - x", j), vec![], vec![j + CRIT], Some(vec![j - CRIT]), vec![]));
    }
    rows.push((poly("x^3 - y^2 + 1"), vec![1.0], vec![], Some(vec![]), vec![]));
    rows.push((poly("x^3 - y^2 - 1"), vec![-1.0], vec![], Some(vec![]), vec![]));
    rows.push((poly("x^3 - y^2"), vec![0.0], vec![], Some(vec![]), vec![]));
    rows.push((poly("x^3 - y"), vec![], vec![], Some(vec![]), vec![]));
    rows.push((poly("x^3 - x*y + 1"), vec![], vec![], None, vec![1.0]));
    rows.push((poly("x^3 - x*y"), vec![], vec![], None, vec![0.0]));

    let mut bad = Vec::new();
    for (f, cusp, isol, node, red) in &rows {
        let r = match invariant_report(f) {
            Ok(r) => r,
            Err(e) => {
                bad.push(format!("{f}: {e}"));
                continue;
            }
        };
        let ok = lists_match(&r.cusp, cusp, TABLE_TOL)
            && lists_match(&r.isol, isol, TABLE_TOL)
            && node.as_ref().map_or(true, |n| lists_match(&r.node, n, TABLE_TOL))
            && lists_match(&r.red, red, TABLE_TOL);
        if !ok {
            bad.push(format!("{f}: got {r:?}"));
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: if bad.is_empty() {
            format!("{} rows", rows.len())
        } else {
            bad.join("; ")
        },
    }
}

fn criterion_complex_sing() -> Outcome {
    let mut bad = Vec::new();
    for j in [0.0, 1.0, -1.0] {
        let f = with_j("x^3 - y^2 + x", j);
        match sing_levels_complex(&f) {
            Ok(s) => {
                let ok = s.len() == 2
                    && (s[0].re - j).abs() <= TABLE_TOL
                    && (s[0].im + CRIT).abs() <= TABLE_TOL
                    && (s[1].re - j).abs() <= TABLE_TOL
                    && (s[1].im - CRIT).abs() <= TABLE_TOL;
                if !ok {
                    bad.push(format!("J = {j}: {s:?}"));
                }
            }
            Err(e) => bad.push(format!("J = {j}: {e}")),
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: if bad.is_empty() { "J in {0, 1, -1}".into() } else { bad.join("; ") },
    }
}

/// Integer polynomials as exponent -> coefficient maps.
type IntPoly = BTreeMap<(u32, u32), i64>;

fn ip(terms: &[((u32, u32), i64)]) -> IntPoly {
    terms.iter().copied().filter(|&(_, c)| c != 0).collect()
}

fn ip_mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut out = IntPoly::new();
    for (&(i, j), &c) in a {
        for (&(k, l), &d) in b {
            *out.entry((i + k, j + l)).or_default() += c * d;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn ip_compose(f: &IntPoly, p: &IntPoly, q: &IntPoly) -> IntPoly {
    let mut out = IntPoly::new();
    for (&(i, j), &c) in f {
        let mut term = ip(&[((0, 0), c)]);
        for _ in 0..i {
            term = ip_mul(&term, p);
        }
        for _ in 0..j {
            term = ip_mul(&term, q);
        }
        for (e, v) in term {
            *out.entry(e).or_default() += v;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn to_int(p: &Poly2) -> Option<IntPoly> {
    p.terms()
        .map(|(e, c)| (c.fract() == 0.0).then_some((e, c as i64)))
        .collect()
}

fn criterion_autdeg() -> Outcome {
    let x3_y = ip(&[((3, 0), 1), ((0, 1), -1)]);
    let x3_xy = ip(&[((3, 0), 1), ((1, 1), -1)]);
    let x3_xy_1 = ip(&[((3, 0), 1), ((1, 1), -1), ((0, 0), 1)]);
    let y = ip(&[((0, 1), 1)]);
    let cube = ip(&[((0, 3), 1), ((1, 0), -1)]);
    let square = ip(&[((0, 2), 1), ((1, 0), -1)]);
    let oracle = [
        (ip_compose(&x3_y, &y, &cube), ip(&[((1, 0), 1)])),
        (ip_compose(&x3_xy, &y, &square), ip(&[((1, 1), 1)])),
        (ip_compose(&x3_xy_1, &y, &square), ip(&[((1, 1), 1), ((0, 0), 1)])),
    ];
    let rows = check_autdeg_table();
    let mut bad = Vec::new();
    for (k, ((image, expected), row)) in oracle.iter().zip(&rows).enumerate() {
        if image != expected {
            bad.push(format!("row {k}: oracle image {image:?}"));
        }
        if !row.pass || to_int(&row.image).as_ref() != Some(expected) {
            bad.push(format!("row {k}: library image {}", row.image));
        }
    }
    if rows.len() != 3 {
        bad.push(format!("{} rows", rows.len()));
    }
    Outcome {
        pass: bad.is_empty(),
        detail: if bad.is_empty() { "3 rows".into() } else { bad.join("; ") },
    }
}

/// The fixed sample of canonical representatives, parameters strictly
/// inside their constraint regions.
fn representatives() -> Vec<(FamilyId, Params)> {
    use FamilyId::*;
    let p = |f: FamilyId, h: f64, i: f64, j: f64| (f, f.restrict(h, i, j));
    vec![
        p(X3_P_XY2_P_X2_HIJ, 0.7, 1.3, -0.4),
        p(X3_P_XY2_P_Y_HJ, -0.6, 0.0, 0.8),
        p(X3_P_XY2_P_X_J, 0.0, 0.0, 0.5),
        p(X3_P_XY2_M_X_J, 0.0, 0.0, 1.2),
        p(X3_P_XY2_P_1, 0.0, 0.0, 0.0),
        p(X3_P_XY2, 0.0, 0.0, 0.0),
        p(X3_M_XY2_M_Y2_HIJ, -1.5, 0.5, 2.0),
        p(X3_M_XY2_M_Y_HJ, 0.3, 0.0, 0.7),
        p(X3_M_XY2_P_1, 0.0, 0.0, 0.0),
        p(X3_M_XY2, 0.0, 0.0, 0.0),
        p(X2Y_P_Y2_M_X_IJ, 0.0, 0.4, -0.9),
        p(X2Y_P_Y2_P_Y_J, 0.0, 0.0, 0.3),
        p(X2Y_P_Y2_M_1, 0.0, 0.0, 0.0),
        p(X2Y_P_Y2, 0.0, 0.0, 0.0),
        p(X2Y_M_X_P_Y_J, 0.0, 0.0, 0.6),
        p(X2Y_M_Y_P_1, 0.0, 0.0, 0.0),
        p(X2Y_M_X_P_1, 0.0, 0.0, 0.0),
        p(X2Y, 0.0, 0.0, 0.0),
        p(X3_M_Y2_P_X_J, 0.0, 0.0, 1.0),
        p(X3_M_Y2_M_X_J, 0.0, 0.0, -2.0),
        p(X3_M_Y2_P_1, 0.0, 0.0, 0.0),
        p(X3_M_Y2, 0.0, 0.0, 0.0),
        p(X3_M_Y, 0.0, 0.0, 0.0),
        p(X3_M_XY_P_1, 0.0, 0.0, 0.0),
        p(X3_M_XY, 0.0, 0.0, 0.0),
    ]
}

fn criterion_orbit() -> Outcome {
    let reps = representatives();
    let eps = Tolerances::default().case;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut total, mut ok, mut explained, mut unexplained) = (0usize, 0usize, 0usize, Vec::new());
    for (family, params) in &reps {
        let g = family.polynomial(params);
        for _ in 0..200 {
            let map = sample_affine_with(&mut rng, 3.0).expect("valid range");
            let mag: f64 = rng.gen_range(0.5..2.0);
            let c = if rng.gen_bool(0.5) { mag } else { -mag };
            let f = map.apply_with_chop(&g, 0.0).scale_with_chop(c, 0.0);
            total += 1;
            match classify(&f) {
                Ok(r) if r.family == *family && r.params.max_abs_diff(params) <= 1e-6 => ok += 1,
                Ok(r) if !r.trace.near_boundary(eps).is_empty() => explained += 1,
                Ok(r) => unexplained.push(format!("{family} -> {} {:?}", r.family, r.params)),
                Err(e) => unexplained.push(format!("{family}: {e}")),
            }
        }
    }
    let rate = ok as f64 / total as f64;
    let pass = rate >= 0.995 && unexplained.is_empty();
    let mut detail = format!(
        "{ok}/{total} stable ({:.2}%), {explained} near-boundary, {} unexplained",
        100.0 * rate,
        unexplained.len()
    );
    if !unexplained.is_empty() {
        detail.push_str(&format!(": {}", unexplained.iter().take(5).cloned().collect::<Vec<_>>().join("; ")));
    }
    Outcome { pass, detail }
}

/// `max|f(w) - scale * g| / max|f|`, by direct substitution.
fn substitution_residual(f: &Poly2, w: &AffineMap, scale: f64, g: &Poly2) -> f64 {
    let image = f.compose_with_chop(&w.to_substitution(), 0.0);
    image.max_abs_diff(&g.scale(scale)) / f.max_abs()
}

fn random_cubic(rng: &mut ChaCha8Rng, range: f64) -> Poly2 {
    let mut p = Poly2::zero();
    for d in 0..=3u32 {
        for i in 0..=d {
            p = p.add_raw_term(i, d - i, rng.gen_range(-range..=range));
        }
    }
    p
}

fn criterion_witness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let tol = Tolerances {
        residual: f64::INFINITY,
        ..Tolerances::default()
    };
    let (mut completed, mut worst, mut bad, mut errors) = (0usize, 0.0f64, 0usize, Vec::new());
    for _ in 0..1000 {
        let f = random_cubic(&mut rng, 10.0);
        match classify_with(&f, &tol) {
            Ok(r) => {
                completed += 1;
                let res = substitution_residual(&f, &r.witness, r.scale, &r.family.polynomial(&r.params));
                worst = worst.max(res);
                if !(res <= 1e-6) {
                    bad += 1;
                }
            }
            Err(e) => errors.push(e.to_string()),
        }
    }
    let mut detail = format!("{completed}/1000 completed, worst residual {worst:.3e}, {bad} over bound");
    if !errors.is_empty() {
        detail.push_str(&format!(", not completed: {}", errors.join("; ")));
    }
    Outcome {
        pass: bad == 0 && completed > 0,
        detail,
    }
}

/// Level sets of `a` equal `c` times those of `b` for some `c != 0`.
fn signatures_agree(a: &InvariantReport, b: &InvariantReport) -> bool {
    let la = [&a.cusp, &a.isol, &a.node, &a.red, &a.other_singular];
    let lb = [&b.cusp, &b.isol, &b.node, &b.red, &b.other_singular];
    if a.nonisolated_singular_locus != b.nonisolated_singular_locus
        || a.red_continuum != b.red_continuum
        || la.iter().zip(&lb).any(|(x, y)| x.len() != y.len())
    {
        return false;
    }
    let agree_with = |c: f64| {
        la.iter().zip(&lb).all(|(x, y)| {
            let mut scaled: Vec<f64> = y.iter().map(|v| c * v).collect();
            scaled.sort_by(f64::total_cmp);
            lists_match(x, &scaled, 1e-6 * (1.0 + c.abs()))
        })
    };
    let va: Vec<f64> = la.iter().flat_map(|l| l.iter().copied()).collect();
    let vb: Vec<f64> = lb.iter().flat_map(|l| l.iter().copied()).collect();
    let mut candidates = vec![1.0, -1.0];
    for x in &va {
        for y in &vb {
            if y.abs() > 1e-9 {
                candidates.push(x / y);
            }
        }
    }
    candidates.into_iter().filter(|c| *c != 0.0).any(agree_with)
}

/// Best `c` in `image ≈ c * g` by least squares, and the relative residual.
fn best_scale_residual(image: &Poly2, g: &Poly2) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for ((i, j), v) in g.terms() {
        num += v * image.coeff(i, j);
        den += v * v;
    }
    let c = if den > 0.0 { num / den } else { 0.0 };
    image.max_abs_diff(&g.scale(c)) / image.max_abs()
}

fn criterion_separation() -> Outcome {
    let reps: Vec<(FamilyId, Params, Poly2)> = representatives()
        .into_iter()
        .map(|(f, p)| (f, p, f.polynomial(&p)))
        .collect();
    let reports: Vec<InvariantReport> = reps
        .iter()
        .map(|(_, _, g)| invariant_report(g).expect("representatives have reports"))
        .collect();
    let classes: Vec<_> = reps.iter().map(|(_, _, g)| classify(g).expect("representatives classify")).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut pairs, mut by_invariants, mut by_search, mut bad) = (0usize, 0usize, 0usize, Vec::new());
    for a in 0..reps.len() {
        for b in a + 1..reps.len() {
            pairs += 1;
            let (ca, cb) = (&classes[a], &classes[b]);
            if ca.family == cb.family && ca.params.max_abs_diff(&cb.params) <= 1e-6 {
                bad.push(format!("{} ~ {} by classify", reps[a].0, reps[b].0));
                continue;
            }
            if !signatures_agree(&reports[a], &reports[b]) {
                by_invariants += 1;
                continue;
            }
            let found = (0..200).any(|_| {
                let map = sample_affine_with(&mut rng, 3.0).expect("valid range");
                best_scale_residual(&map.apply_with_chop(&reps[a].2, 0.0), &reps[b].2) <= 1e-6
            });
            if found {
                bad.push(format!("{} ~ {} by search", reps[a].0, reps[b].0));
            } else {
                by_search += 1;
            }
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: format!(
            "{pairs} pairs: {by_invariants} by invariants, {by_search} by search{}",
            if bad.is_empty() { String::new() } else { format!("; equal: {}", bad.join(", ")) }
        ),
    }
}

fn criterion_cubic_form() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut total, mut bad) = (0usize, Vec::new());
    for form in CanonicalCubicForm::ALL {
        let h = form.polynomial();
        let mut done = 0;
        while done < 1000 {
            let m: [i32; 4] = std::array::from_fn(|_| rng.gen_range(-3..=3));
            if m[0] * m[3] - m[1] * m[2] == 0 {
                continue;
            }
            done += 1;
            total += 1;
            let lin = AffineMap::linear(m[0] as f64, m[1] as f64, m[2] as f64, m[3] as f64).expect("invertible");
            let f = h.compose_with_chop(&lin.to_substitution(), 0.0);
            match classify_binary_cubic(&f) {
                Ok(r) => {
                    let res = substitution_residual(&f, &r.linmap, r.scale, &h);
                    if r.form != form || !(res <= 1e-8) {
                        bad.push(format!("{form} under {m:?}: {} residual {res:e}", r.form));
                    }
                }
                Err(e) => bad.push(format!("{form} under {m:?}: {e}")),
            }
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: format!(
            "{}/{total} correct{}",
            total - bad.len(),
            if bad.is_empty() { String::new() } else { format!(": {}", bad.iter().take(5).cloned().collect::<Vec<_>>().join("; ")) }
        ),
    }
}

fn criterion_parser() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut bad = Vec::new();
    for _ in 0..1000 {
        let mut f = Poly2::zero();
        for d in 0..=3u32 {
            for i in 0..=d {
                if rng.gen_bool(0.6) {
                    f = f.add_raw_term(i, d - i, rng.gen_range(-20i32..=20) as f64);
                }
            }
        }
        f = f.add_raw_term(3, 0, rng.gen_range(1i32..=9) as f64);
        let text = f.to_string();
        match parse_poly(&text) {
            Ok(g) if g == f => {}
            other => bad.push(format!("{text}: {other:?}")),
        }
    }
    let alphabet = b"xy0123456789+-*^(). ;e,";
    let mut crashes = 0usize;
    let mut unpositioned = 0usize;
    let prev_hook = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    for k in 0..100_000 {
        let len = rng.gen_range(0..24);
        let bytes: Vec<u8> = (0..len)
            .map(|_| if k % 2 == 0 { alphabet[rng.gen_range(0..alphabet.len())] } else { rng.gen() })
            .collect();
        let text = String::from_utf8_lossy(&bytes).into_owned();
        match panic::catch_unwind(|| parse_poly(&text)) {
            Ok(Ok(_)) => {}
            Ok(Err(e)) => {
                if e.offset > text.len() {
                    unpositioned += 1;
                }
            }
            Err(_) => crashes += 1,
        }
    }
    panic::set_hook(prev_hook);
    Outcome {
        pass: bad.is_empty() && crashes == 0 && unpositioned == 0,
        detail: format!(
            "round trip {}/1000, fuzz 100000 inputs: {crashes} crashes, {unpositioned} bad offsets{}",
            1000 - bad.len(),
            if bad.is_empty() { String::new() } else { format!(": {}", bad[0]) }
        ),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 8] = [
        ("1 invariant table", criterion_table, Duration::from_secs(5)),
        ("2 complex singular levels", criterion_complex_sing, Duration::from_secs(1)),
        ("3 minimal-degree table", criterion_autdeg, Duration::from_millis(100)),
        ("4 orbit stability", criterion_orbit, Duration::from_secs(60)),
        ("5 witness soundness", criterion_witness, Duration::from_secs(30)),
        ("6 separation", criterion_separation, Duration::from_secs(60)),
        ("7 cubic-form reducer", criterion_cubic_form, Duration::from_secs(10)),
        ("8 parser", criterion_parser, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let pass = out.pass && elapsed <= limit;
        if !pass {
            failed += 1;
        }
        println!(
            "{} criterion {name}: {} [{:.3}s, limit {:.1}s]",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64(),
            limit.as_secs_f64()
        );
    }
    println!("{}/8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
