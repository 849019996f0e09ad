//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Every comparison is exact (zero residual over ℚ(t, params)); the only
//! numeric thresholds are the wall-clock budgets below.
//!
//! Criterion 4 needs the seven structure-constant tables that are not shipped.
//! Point `LIEDEGEN_EXTERNAL_CONSTANTS` at a filled copy of
//! `external_constants_template.json` to run it.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use liedegen_core::catalog::{self, Fixture};
use liedegen_core::deform::{build_mu_d, is_valid_deformation, theorem1_pipeline};
use liedegen_core::degen::{certify_degeneration, extend_derivation, limit_at_zero, verify_witness, witness_from_weights};
use liedegen_core::lie::families::{filiform, filiform_weights, heisenberg, heisenberg_weights};
use liedegen_core::linalg::{basis_vector, format_vector, is_zero_vector};
use liedegen_core::{parse_scalar, Error, LieAlgebra, LinearMap, Rational, Scalar, Subspace, Symbols};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BUDGET_1: Duration = Duration::from_secs(1);
const BUDGET_2: Duration = Duration::from_secs(10);
const BUDGET_3: Duration = Duration::from_secs(1);
const BUDGET_4: Duration = Duration::from_secs(30);
const CASES: usize = 100;
const SEED: u64 = 0x5EED_2024;

type Outcome = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn scalar(text: &str, syms: &Symbols) -> Scalar {
    parse_scalar(text, syms).unwrap_or_else(|e| panic!("bad literal {text}: {e}"))
}

fn vector(terms: &[(usize, &str)], n: usize, syms: &Symbols) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    for &(k, c) in terms {
        v[k - 1] = scalar(c, syms);
    }
    v
}

fn within(budget: Duration, start: Instant) -> std::result::Result<String, String> {
    let took = start.elapsed();
    if took > budget {
        return Err(format!("took {:.2} s, budget {} s", took.as_secs_f64(), budget.as_secs()));
    }
    Ok(format!("{:.2} s of {} s", took.as_secs_f64(), budget.as_secs()))
}

// ---------------------------------------------------------------------------

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let f = catalog::fixture("12346E").map_err(|e| e.to_string())?;
    let mu = f.algebra.clone().ok_or("12346E has no constants")?;
    let syms = Symbols::default();
    ensure!(mu.jacobi_residuals().is_empty(), "Jacobi residuals on 12346E");

    let phi = build_mu_d(&mu, &f.x_vector(), &f.ideal_subspace(), &f.derivation).map_err(|e| e.to_string())?;
    let mu_t = mu.table().combine(&phi, &Scalar::t()).map_err(|e| e.to_string())?;
    let displayed: [(usize, usize, &[(usize, &str)]); 8] = [
        (1, 2, &[(3, "1"), (2, "t")]),
        (1, 3, &[(4, "1")]),
        (1, 4, &[(5, "1"), (4, "2*t")]),
        (1, 5, &[(5, "t")]),
        (1, 6, &[(6, "2*t")]),
        (2, 3, &[(5, "1")]),
        (2, 5, &[(6, "1")]),
        (3, 4, &[(6, "-1")]),
    ];
    ensure!(mu_t.num_nonzero_pairs() == displayed.len(), "mu_t has {} nonzero pairs, table has {}", mu_t.num_nonzero_pairs(), displayed.len());
    for (i, j, terms) in displayed {
        let got = mu_t.get(i - 1, j - 1);
        ensure!(got == vector(terms, 6, &syms), "mu_t(e{i}, e{j}) = {}", format_vector(&got, &syms));
    }

    let cert = f.certify().map_err(|e| e.to_string())?;
    let mu1 = cert.mu1.clone().ok_or("no mu1")?;
    let curve = cert.curve.clone().ok_or("no curve")?;
    let g = LinearMap::diagonal(&[1, 2, 3, 4, 5, 7].map(Scalar::t_pow));
    ensure!(f.witness.g == g, "bundled witness differs from diag(t, t^2, t^3, t^4, t^5, t^7)");
    let residuals = verify_witness(&mu1, curve.realized(), &f.witness).map_err(|e| e.to_string())?;
    ensure!(residuals.is_empty(), "{} witness residuals", residuals.len());
    let ginv = g.inverse().map_err(|e| e.to_string())?;
    let conj = mu1.gl_action_with_inverse(&ginv, &g).map_err(|e| e.to_string())?;
    ensure!(conj.same_brackets(curve.realized()), "g^-1 . mu1 differs from mu_t");
    let lim = limit_at_zero(&conj).map_err(|e| e.to_string())?;
    ensure!(lim.same_brackets(&mu), "limit differs from mu");
    ensure!(mu1.is_solvable() && !mu1.is_nilpotent(), "mu1 solvable {} nilpotent {}", mu1.is_solvable(), mu1.is_nilpotent());
    ensure!(cert.is_valid(), "certificate INVALID");
    let t = within(BUDGET_1, start)?;
    Ok(format!("12346_E: mu_t table, witness, limit and mu1 solvable-not-nilpotent reproduced exactly ({t})"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let f = catalog::fixture("g7_0_4").map_err(|e| e.to_string())?;
    let mu = f.algebra.clone().ok_or("g7_0_4 has no constants")?;
    let syms = f.symbols.clone();
    let cert = f.certify().map_err(|e| e.to_string())?;
    for c in &cert.checks {
        ensure!(c.passed, "check {} failed: {}", c.name, c.detail);
    }
    let mu1 = cert.mu1.clone().ok_or("no mu1")?;
    let curve = cert.curve.clone().ok_or("no curve")?;
    let g = &f.witness.g;
    // right-hand sides of the ten displayed identities g_t mu_t(e_i, e_j) = mu_1(g_t e_i, g_t e_j)
    let identities: [(usize, usize, &[(usize, &str)]); 10] = [
        (1, 2, &[(2, "t"), (3, "t"), (5, "t-lam*t+lam-1/t"), (6, "(1/4)*((1-t^2)/t)"), (7, "t-lam*t+lam-1/t")]),
        (1, 3, &[(4, "t^2"), (6, "(1/2)*(1-t^2)"), (7, "(1/2)*t^2-lam*t^2+lam*t-1/2")]),
        (1, 4, &[(6, "t"), (7, "lam*t^2")]),
        (1, 5, &[(5, "t^2"), (7, "lam*t^2-lam*t+1")]),
        (1, 6, &[(7, "t^2"), (6, "2*t^2")]),
        (1, 7, &[(7, "t^3")]),
        (2, 3, &[(5, "t"), (7, "lam*t-t-lam+1/t")]),
        (2, 4, &[(7, "t^2")]),
        (2, 5, &[(6, "t")]),
        (3, 5, &[(7, "t^2")]),
    ];
    for (i, j, terms) in identities {
        let expected = vector(terms, 7, &syms);
        let lhs = g.apply(&curve.realized().table().get(i - 1, j - 1)).map_err(|e| e.to_string())?;
        let rhs = mu1.table().apply(&g.column(i - 1), &g.column(j - 1));
        ensure!(lhs == expected, "g_t mu_t(e{i}, e{j}) = {}", format_vector(&lhs, &syms));
        ensure!(rhs == expected, "mu_1(g_t e{i}, g_t e{j}) = {}", format_vector(&rhs, &syms));
    }
    ensure!(format_vector(&mu.table().get(0, 3), &syms) == "e6 + lam*e7", "mu(e1, e4) misread");
    let t = within(BUDGET_2, start)?;
    Ok(format!("g7,0.4(lambda): all 7 checks pass over Q(t, lambda); 10 displayed identities match ({t})"))
}

fn diag(d: &[i64]) -> LinearMap {
    LinearMap::diagonal(&d.iter().map(|&x| Scalar::from_int(x)).collect::<Vec<_>>())
}

type Transcribed = (&'static str, [usize; 6], LinearMap, [[&'static str; 7]; 7]);

fn table() -> Vec<Transcribed> {
    const H1: [usize; 6] = [1, 3, 4, 5, 6, 7];
    const H2: [usize; 6] = [2, 3, 4, 5, 6, 7];
    let mut d5 = diag(&[1, 0, 1, 3, 2, 3]);
    d5.set(5, 4, Scalar::from_int(-1));
    vec![
        ("g7_0_1", H1, diag(&[1, 3, 4, 5, 6, 7]), [
            ["1", "0", "0", "0", "0", "0", "0"],
            ["0", "t", "0", "0", "0", "0", "0"],
            ["(1/2)*((t-1)/t)", "0", "1", "0", "0", "0", "0"],
            ["0", "0", "0", "1", "0", "0", "0"],
            ["0", "(1/6)*((3*t^2-5*t+2)/t)", "0", "0", "1", "0", "0"],
            ["0", "0", "(1/3)*((1-t)/t)", "0", "0", "1", "0"],
            ["0", "0", "0", "(1/3)*((1-t)/t)", "(1/2)*((1-t)/t)", "0", "1"],
        ]),
        ("g7_0_2", H1, diag(&[1, 0, 1, 2, 3, 4]), [
            ["1", "0", "0", "0", "0", "0", "0"],
            ["0", "t", "0", "0", "0", "0", "0"],
            ["0", "0", "t", "0", "0", "0", "0"],
            ["0", "(1/8)*((4*t-3*t^2-1)/t)", "0", "t", "0", "0", "0"],
            ["(1/8)*((t^2-1)/t^2)", "0", "(1/2)*(1-t)", "0", "t", "0", "0"],
            ["0", "0", "0", "(1/2)*(1-t)", "0", "t", "0"],
            ["0", "0", "(1/8)*((1-t^2)/t)", "0", "(1/2)*(1-t)", "0", "t"],
        ]),
        ("g7_0_3", H1, diag(&[1, 0, 1, 2, 3, 4]), [
            ["1", "0", "0", "0", "0", "0", "0"],
            ["0", "t", "0", "0", "0", "0", "0"],
            ["0", "0", "t", "0", "0", "0", "0"],
            ["(1/4)*((t-1)/t)", "0", "0", "t", "0", "0", "0"],
            ["0", "(1/3)*(1-t)", "0", "0", "t", "0", "0"],
            ["0", "0", "(1/3)*(1-t)", "0", "0", "t", "0"],
            ["0", "0", "(1/4)*(1-t)", "(1/3)*(1-t)", "0", "0", "t"],
        ]),
        ("g7_0_5", H1, d5, [
            ["1", "0", "0", "0", "0", "0", "0"],
            ["0", "t", "0", "0", "0", "0", "0"],
            ["0", "0", "t", "0", "0", "0", "0"],
            ["0", "(1/3)*((t^2-1)/t)", "0", "t", "0", "0", "0"],
            ["(1/6)*((t^2-1)/t^2)", "0", "(1/3)*((1-t^2)/t)", "0", "1", "0", "0"],
            ["0", "0", "(1/6)*((t^2-1)/t)", "0", "0", "t", "0"],
            ["0", "0", "(1/3)*((t^2-1)/t)", "0", "(5/6)*(t^2-1)", "0", "t"],
        ]),
        ("g7_0_6", H2, diag(&[1, 0, 2, 1, 3, 2]), [
            ["t", "0", "0", "0", "0", "0", "0"],
            ["0", "1", "0", "0", "0", "0", "0"],
            ["0", "0", "t", "0", "0", "0", "0"],
            ["0", "(1/2)*((1-t^2)/t^2)", "(1/2)*((1-t^2)/t)", "1", "0", "0", "0"],
            ["0", "0", "0", "0", "t", "0", "0"],
            ["0", "0", "0", "0", "(1/2)*((1-t^2)/t)", "1", "0"],
            ["0", "0", "(1/2)*((1-t^2)/t)", "(3/2)*(1-t^2)", "(1/2)*((t^2-1)/t)", "0", "t"],
        ]),
        ("g7_0_7", H2, diag(&[1, 0, 0, 1, 2, 1]), [
            ["t", "0", "0", "0", "0", "0", "0"],
            ["0", "1", "0", "0", "0", "0", "0"],
            ["0", "0", "t", "0", "0", "0", "0"],
            ["(t-1)", "0", "0", "t^2", "0", "0", "0"],
            ["0", "0", "0", "0", "t", "0", "0"],
            ["0", "0", "0", "0", "0", "t", "0"],
            ["0", "0", "(1-t)", "(1-t)*t", "0", "0", "t^2"],
        ]),
        ("g7_0_8", H2, diag(&[1, 0, 0, 2, 1, 2]), [
            ["t", "0", "0", "0", "0", "0", "0"],
            ["0", "1", "0", "0", "0", "0", "0"],
            ["0", "(1-t^2)", "t^3", "t*(t^2-1)", "0", "0", "0"],
            ["0", "0", "0", "t", "0", "0", "0"],
            ["0", "0", "0", "0", "t^2", "0", "0"],
            ["0", "0", "0", "0", "0", "t^3", "0"],
            ["0", "0", "(1/2)*t^2*(1-t)", "t*(1-t^2)", "t^2*(1-t^2)", "0", "t^3"],
        ]),
    ]
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let syms = Symbols::default();
    let fixtures = catalog::bundled_fixtures().map_err(|e| e.to_string())?;
    let mut entries = 0;
    for (name, ideal, d, g) in table() {
        let f = fixtures.iter().find(|f| f.name == name).ok_or(format!("missing fixture {name}"))?;
        let got_ideal: Vec<usize> = f.ideal.iter().map(|i| i + 1).collect();
        ensure!(got_ideal == ideal, "{name}: ideal {:?}", got_ideal);
        ensure!(f.derivation == d, "{name}: derivation differs");
        for (i, row) in g.iter().enumerate() {
            for (j, text) in row.iter().enumerate() {
                let want = scalar(text, &syms);
                let got = f.witness.g.get(i, j);
                ensure!(*got == want, "{name}: g_t entry ({}, {}) = {}, expected {text}", i + 1, j + 1, got.format(&syms));
                ensure!(got.format(&syms) == want.format(&syms), "{name}: canonical strings differ at ({}, {})", i + 1, j + 1);
                entries += 1;
            }
        }
    }
    let g1 = fixtures.iter().find(|f| f.name == "g7_0_1").unwrap();
    ensure!(*g1.witness.g.get(2, 0) == scalar("(1/2)*(t-1)/t", &syms), "g7,0.1 entry (3,1)");
    let g8 = fixtures.iter().find(|f| f.name == "g7_0_8").unwrap();
    ensure!(*g8.witness.g.get(2, 1) == scalar("1-t^2", &syms), "g7,0.8 entry (3,2)");
    let t = within(BUDGET_3, start)?;
    Ok(format!("7 rows: ideals, derivations and {entries} witness entries match the table ({t})"))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let (source, text) = match std::env::var("LIEDEGEN_EXTERNAL_CONSTANTS") {
        Ok(path) => (path.clone(), std::fs::read_to_string(&path).map_err(|e| format!("{path}: {e}"))?),
        Err(_) => (
            "bundled template".to_string(),
            catalog::bundled_file("external_constants_template.json").ok_or("template missing")?.to_string(),
        ),
    };
    let algebras = catalog::template_algebras(&text).map_err(|e| format!("{source}: {e}"))?;
    let rows: Vec<Fixture> = catalog::bundled_fixtures().map_err(|e| e.to_string())?.into_iter().filter(|f| f.requires_external).collect();
    let mut failures = Vec::new();
    let mut empty = Vec::new();
    let mut valid = 0;
    for row in &rows {
        let Some(mu) = algebras.iter().find(|a| a.name == row.name || a.name == row.label) else {
            failures.push(format!("{}: not in {source}", row.label));
            continue;
        };
        if mu.table().num_nonzero_pairs() == 0 {
            empty.push(row.label.clone());
            continue;
        }
        match catalog::attach_constants(row, mu.clone(), false).and_then(|f| f.certify()) {
            Ok(cert) if cert.is_valid() => valid += 1,
            Ok(cert) => {
                let failed: Vec<&str> = cert.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
                failures.push(format!("{}: INVALID ({})", row.label, failed.join(", ")));
            }
            Err(e) => failures.push(format!("{}: {e}", row.label)),
        }
    }
    if !empty.is_empty() {
        failures.push(format!("no structure constants for {}", empty.join(", ")));
    }
    if !failures.is_empty() {
        return Err(format!(
            "{valid}/{} rows certified from {source}. {}. The constants come from an external classification and are not shipped; set LIEDEGEN_EXTERNAL_CONSTANTS to a filled template",
            rows.len(),
            failures.join("; ")
        ));
    }
    let t = within(BUDGET_4, start)?;
    Ok(format!("{valid}/{} table rows certify VALID with constants from {source} ({t})", rows.len()))
}

// ---------------------------------------------------------------------------
// criterion 5

fn small_rational(rng: &mut ChaCha8Rng) -> Scalar {
    let n = rng.random_range(-4i64..=4);
    let d = if rng.random_bool(0.3) { rng.random_range(2i64..=3) } else { 1 };
    Scalar::from_ratio(n, d)
}

/// Random invertible matrix: lower-triangular with nonzero diagonal times a permutation.
fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> LinearMap {
    let mut l = LinearMap::identity(n);
    for i in 0..n {
        let mut d = small_rational(rng);
        if d.is_zero() {
            d = Scalar::one();
        }
        l.set(i, i, d);
        for j in 0..i {
            if rng.random_bool(0.5) {
                l.set(i, j, small_rational(rng));
            }
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    let mut p = LinearMap::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        p.set(i, j, Scalar::one());
    }
    l.matmul(&p).unwrap()
}

fn random_family(rng: &mut ChaCha8Rng) -> LieAlgebra {
    match rng.random_range(0..4) {
        0 => heisenberg(1),
        1 => heisenberg(2),
        2 => filiform(rng.random_range(3..=7)),
        _ => catalog::fixture("12346E").unwrap().algebra.unwrap(),
    }
}

fn suite_gl(rng: &mut ChaCha8Rng) -> Outcome {
    for case in 0..CASES {
        let base = random_family(rng);
        let n = base.dim();
        // conjugate once so the constants are not all 0/±1
        let mu = base.gl_action(&random_invertible(rng, n)).unwrap();
        let (g, h) = (random_invertible(rng, n), random_invertible(rng, n));
        let gh = g.matmul(&h).unwrap();
        let lhs = mu.gl_action(&gh).map_err(|e| e.to_string())?;
        let rhs = mu.gl_action(&h).and_then(|m| m.gl_action(&g)).map_err(|e| e.to_string())?;
        ensure!(lhs.same_brackets(&rhs), "case {case}: (gh).mu != g.(h.mu) on {}", base.name);
        ensure!(lhs.jacobi_residuals().is_empty(), "case {case}: g.mu violates Jacobi on {}", base.name);
    }
    Ok(format!("group law and Jacobi preservation on {CASES} pairs"))
}

fn suite_deformations(rng: &mut ChaCha8Rng) -> Outcome {
    for f in catalog::bundled_fixtures().map_err(|e| e.to_string())?.iter().filter(|f| f.is_complete()) {
        let mu = f.algebra.as_ref().unwrap();
        let phi = build_mu_d(mu, &f.x_vector(), &f.ideal_subspace(), &f.derivation).map_err(|e| e.to_string())?;
        let report = is_valid_deformation(mu, &phi).map_err(|e| e.to_string())?;
        ensure!(report.is_valid(), "{}: {}", f.label, report.describe());
    }
    for case in 0..CASES {
        let mu = match case % 3 {
            0 => heisenberg(1),
            1 => heisenberg(2),
            _ => filiform(rng.random_range(3..=7)),
        };
        let n = mu.dim();
        let h = Subspace::from_indices(n, 1..n);
        let restricted = mu.restrict(&h).map_err(|e| e.to_string())?;
        let basis = restricted.diagonal_derivations();
        let mut d = vec![Scalar::zero(); n - 1];
        for b in &basis {
            let c = small_rational(rng);
            for (x, y) in d.iter_mut().zip(b) {
                *x = &*x + &(&c * y);
            }
        }
        let d = LinearMap::diagonal(&d);
        let phi = build_mu_d(&mu, &basis_vector(n, 0), &h, &d).map_err(|e| format!("case {case}: {e}"))?;
        let report = is_valid_deformation(&mu, &phi).map_err(|e| e.to_string())?;
        ensure!(report.is_valid(), "case {case} on {}: {}", mu.name, report.describe());
    }
    Ok(format!("mu_D valid on both complete fixtures and {CASES} random diagonal inputs"))
}

fn suite_pipeline() -> Outcome {
    let q = |w: &[i64]| w.iter().map(|&x| Rational::from_integer(x.into())).collect::<Vec<_>>();
    let mut cases: Vec<(LieAlgebra, Vec<Rational>)> = vec![(heisenberg(1), q(&heisenberg_weights(1))), (heisenberg(2), q(&heisenberg_weights(2)))];
    for n in 3..=7 {
        cases.push((filiform(n), q(&filiform_weights(n))));
    }
    for (mu, weights) in cases {
        let d = LinearMap::diagonal(&weights.iter().cloned().map(Scalar::from_rational).collect::<Vec<_>>());
        let data = theorem1_pipeline(&mu, &d).map_err(|e| format!("{}: {e}", mu.name))?;
        let ext = extend_derivation(&mu, &data.h, &data.d_h, &data.x)
            .map_err(|e| format!("{}: {e}", mu.name))?
            .ok_or(format!("{}: no extension", mu.name))?;
        let ext_weights: Vec<Rational> = (0..mu.dim())
            .map(|i| ext.derivation.get(i, i).as_rational().ok_or(format!("{}: non-rational weight", mu.name)))
            .collect::<std::result::Result<_, _>>()?;
        let w = witness_from_weights(&ext_weights);
        let explicit = certify_degeneration(&mu, &data.x, &data.h, &data.d_h, Some(&w));
        ensure!(explicit.is_valid(), "{} with witness_from_weights: {:?}", mu.name, explicit.checks.iter().filter(|c| !c.passed).map(|c| &c.detail).collect::<Vec<_>>());
        let constructed = certify_degeneration(&mu, &data.x, &data.h, &data.d_h, None);
        ensure!(constructed.is_valid(), "{} with constructed witness", mu.name);
    }
    Ok("VALID certificates for h3, h5, L3..L7".into())
}

fn suite_semisimple(rng: &mut ChaCha8Rng) -> Outcome {
    for case in 0..CASES {
        let n = rng.random_range(2..=6);
        let mut eig: Vec<i64> = (0..n).map(|_| rng.random_range(-2..=2)).collect();
        eig.sort_unstable();
        let mut d = LinearMap::diagonal(&eig.iter().map(|&x| Scalar::from_int(x)).collect::<Vec<_>>());
        let mut jordan = false;
        if rng.random_bool(0.5) {
            if let Some(i) = (0..n - 1).find(|&i| eig[i] == eig[i + 1]) {
                d.set(i, i + 1, Scalar::one());
                jordan = true;
            }
        }
        let p = random_invertible(rng, n);
        let a = p.matmul(&d).unwrap().matmul(&p.inverse().unwrap()).unwrap();
        let got = a.is_semisimple().map_err(|e| e.to_string())?;
        ensure!(got == !jordan, "case {case}: is_semisimple = {got}, construction says {}", !jordan);
    }
    Ok(format!("is_semisimple matches P diag P^-1 constructions on {CASES} matrices"))
}

fn suite_linalg(rng: &mut ChaCha8Rng) -> Outcome {
    for case in 0..CASES {
        let n = rng.random_range(1..=6);
        let mut rows: Vec<Vec<Scalar>> = (0..n).map(|_| (0..n).map(|_| small_rational(rng)).collect()).collect();
        if n > 1 && rng.random_bool(0.4) {
            // force a dependency
            let c = small_rational(rng);
            rows[n - 1] = rows[0].iter().zip(&rows[1]).map(|(x, y)| x + &(&c * y)).collect();
        }
        let a = LinearMap::from_rows(rows).unwrap();
        let kernel = a.kernel();
        for v in &kernel {
            ensure!(is_zero_vector(&a.apply(v).unwrap()), "case {case}: A v != 0");
        }
        ensure!(kernel.len() + a.rank() == n, "case {case}: rank-nullity");
        match a.inverse() {
            Ok(inv) => ensure!(a.matmul(&inv).unwrap() == LinearMap::identity(n), "case {case}: A A^-1 != I"),
            Err(Error::Singular) => ensure!(!kernel.is_empty(), "case {case}: invertible matrix reported singular"),
            Err(e) => return Err(format!("case {case}: {e}")),
        }
        let m = a.minimal_polynomial().map_err(|e| e.to_string())?;
        ensure!(m.eval_matrix(&a).unwrap().is_zero(), "case {case}: m(A) != 0");
    }
    Ok(format!("A v = 0, A A^-1 = I, m(A) = 0 on {CASES} matrices"))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut parts = Vec::new();
    let suites: [(&str, Box<dyn Fn(&mut ChaCha8Rng) -> Outcome>); 5] = [
        ("gl", Box::new(suite_gl)),
        ("deformation", Box::new(suite_deformations)),
        ("pipeline", Box::new(|_| suite_pipeline())),
        ("semisimple", Box::new(suite_semisimple)),
        ("linalg", Box::new(suite_linalg)),
    ];
    for (name, suite) in suites {
        match suite(&mut rng) {
            Ok(msg) => parts.push(msg),
            Err(msg) => return Err(format!("{name} suite: {msg}")),
        }
    }
    Ok(parts.join("; "))
}

// ---------------------------------------------------------------------------

fn criterion_6() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let bin = env!("CARGO_BIN_EXE_liedegen");
    let f = catalog::fixture("12346E").map_err(|e| e.to_string())?;
    let cert = f.certify().map_err(|e| e.to_string())?;
    let syms = Symbols::default();
    let mu1_path = dir.path().join("mu1.alg.json");
    let curve_path = dir.path().join("curve.alg.json");
    let g_path = dir.path().join("g.map.json");
    catalog::save_algebra(cert.mu1.as_ref().unwrap(), &mu1_path).map_err(|e| e.to_string())?;
    catalog::save_algebra(cert.curve.as_ref().unwrap().realized(), &curve_path).map_err(|e| e.to_string())?;
    let mut g = f.witness.g.clone();
    // perturb entry (3, 1) by +t
    g.set(2, 0, &g.get(2, 0).clone() + &Scalar::t());
    catalog::save_map(&g, &syms, &g_path).map_err(|e| e.to_string())?;

    let out = Command::new(bin).arg("witness").arg(&mu1_path).arg(&curve_path).arg(&g_path).output().map_err(|e| e.to_string())?;
    let stdout = String::from_utf8_lossy(&out.stdout);
    ensure!(out.status.code() == Some(1), "corrupted witness exited with {:?}", out.status.code());
    let named = stdout.lines().find(|l| l.contains("mu1(g e") && l.contains(" = ")).ok_or("no residual line naming a basis pair")?.trim().to_string();

    let pole = LieAlgebra::new("pole", Symbols::default(), {
        let mut t = liedegen_core::StructureTable::new(3);
        t.set_coefficient(0, 1, 2, scalar("1/t", &syms)).unwrap();
        t
    });
    match limit_at_zero(&pole) {
        Err(Error::PoleAtZero { valuation: -1, .. }) => {}
        other => return Err(format!("limit_at_zero on 1/t: {other:?}")),
    }
    let pole_path = dir.path().join("pole.alg.json");
    catalog::save_algebra(&pole, &pole_path).map_err(|e| e.to_string())?;
    let out = Command::new(bin).arg("limit").arg(&pole_path).output().map_err(|e| e.to_string())?;
    let stderr = String::from_utf8_lossy(&out.stderr);
    ensure!(out.status.code() == Some(1), "limit on a pole exited with {:?}", out.status.code());
    ensure!(stderr.contains("valuation -1"), "limit error does not report valuation -1: {stderr}");
    Ok(format!("corrupted witness exit 1 [{named}]; 1/t curve fails with valuation -1"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 6] = [
        ("12346_E example", criterion_1),
        ("g7,0.4(lambda) certificate", criterion_2),
        ("table golden entries", criterion_3),
        ("table certification", criterion_4),
        ("property suites", criterion_5),
        ("negative controls", criterion_6),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        match outcome {
            Ok(msg) => println!("PASS criterion {} ({name}): {msg}", k + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {msg}", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
