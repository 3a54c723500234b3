//! One test per acceptance criterion. Each prints a single `PASS`/`FAIL` line
//! naming the criterion, followed by the clauses that failed.

use std::process::Command;

use nalgebra::DMatrix;
use serde_json::Value;

use permsym::ci::{build_basis, first_quantized_ci_matrix, hamiltonian_matrix, product_basis_oracle, run_ci, CiResult};
use permsym::levelsym::{
    decompose_level, level_characters, level_vector_from_hermite_products, salc, span_residual, ROUNDING_GUARD,
};
use permsym::oscillator::{enumerate_levels, level_representation, make_model, OscillatorModel};
use permsym::spin::{allowed_by_characters, allowed_by_construction, multiplet_table, HalfInt};
use permsym::symgroup::{character_table, rational_identity, rational_matmul, CharacterTable, Rational};

/// Degenerate-mode quanta with a coefficient on the unnormalized Hermite product.
type Combination = Vec<(Vec<usize>, f64)>;

/// Irrep label with its allowed spins, doubled.
type SpinRows = &'static [(&'static str, &'static [i32])];

struct Criterion {
    number: u32,
    title: &'static str,
    failures: Vec<String>,
}

impl Criterion {
    fn new(number: u32, title: &'static str) -> Self {
        Criterion { number, title, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, clause: impl Into<String>) {
        if !ok {
            self.failures.push(clause.into());
        }
    }

    fn finish(self) {
        let verdict = if self.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {}: {}", self.number, self.title);
        for f in &self.failures {
            println!("    failed: {f}");
        }
        assert!(self.failures.is_empty(), "criterion {} failed: {:?}", self.number, self.failures);
    }
}

fn mults(m: &OscillatorModel, t: &CharacterTable, n_sym: usize) -> Vec<(String, usize)> {
    let level = decompose_level(m, &m.level(n_sym, 0), t).unwrap();
    level.irrep_mults.into_iter().filter(|(_, k)| *k > 0).collect()
}

fn expect(v: &[(&str, usize)]) -> Vec<(String, usize)> {
    v.iter().map(|(l, k)| (l.to_string(), *k)).collect()
}

fn cli(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_permsym")).args(args).output().expect("run permsym");
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), json)
}

fn quanta_keys(list: &Value) -> Vec<(u64, u64)> {
    list.as_array()
        .map(|a| {
            a.iter().map(|x| (x["quanta_key"][0].as_u64().unwrap(), x["quanta_key"][1].as_u64().unwrap())).collect()
        })
        .unwrap_or_default()
}

#[test]
fn criterion_01_character_tables() {
    let mut c = Criterion::new(1, "C3v character table entry for entry; both tables orthogonal");
    let t = character_table(3).unwrap();
    let aliases: Vec<&str> = t.classes.iter().map(|k| k.alias.as_str()).collect();
    c.check(aliases == ["E", "3σv", "2C3"], format!("class order {aliases:?}"));
    let sizes: Vec<usize> = t.classes.iter().map(|k| k.size).collect();
    c.check(sizes == [1, 3, 2], format!("class sizes {sizes:?}"));
    let rows: Vec<(&str, &[i64])> =
        t.irreps.iter().map(|g| g.label.as_str()).zip(t.chars.iter().map(Vec::as_slice)).collect();
    let printed: [(&str, &[i64]); 3] = [("A1", &[1, 1, 1]), ("A2", &[1, -1, 1]), ("E", &[2, 0, -1])];
    c.check(rows == printed, format!("rows {rows:?}"));
    for n in [3, 4] {
        let t = character_table(n).unwrap();
        c.check(t.validate().is_ok(), format!("N={n} orthogonality {:?}", t.validate()));
    }
    c.finish();
}

#[test]
fn criterion_02_irrep_content_n3() {
    let mut c = Criterion::new(2, "N=3 level irrep content from traces, rounding guard 1e-6");
    let m = make_model(3, 0.1).unwrap();
    let t = character_table(3).unwrap();
    let expected = [
        expect(&[("A1", 1)]),
        expect(&[("E", 1)]),
        expect(&[("A1", 1), ("E", 1)]),
        expect(&[("A1", 1), ("A2", 1), ("E", 1)]),
        expect(&[("A1", 1), ("E", 2)]),
    ];
    for (n_sym, want) in expected.iter().enumerate() {
        let got = mults(&m, &t, n_sym);
        c.check(&got == want, format!("n_sym={n_sym}: {got:?}"));
        let rounding = level_characters(&m, &m.level(n_sym, 0)).unwrap().max_rounding;
        c.check(rounding <= ROUNDING_GUARD, format!("n_sym={n_sym}: rounding {rounding}"));
    }
    c.finish();
}

#[test]
fn criterion_03_salc_reproduction() {
    let mut c = Criterion::new(3, "SALC spans contain the printed combinations");
    let m = make_model(3, 0.1).unwrap();
    let t = character_table(3).unwrap();
    let cases: [(usize, &str, Combination); 3] = [
        (2, "A1", vec![(vec![2, 0], 1.0), (vec![0, 2], 1.0)]),
        (3, "A2", vec![(vec![3, 0], 1.0), (vec![1, 2], -3.0)]),
        (3, "A1", vec![(vec![2, 1], 3.0), (vec![0, 3], -1.0)]),
    ];
    for (n_sym, label, combo) in cases {
        let set = salc(&m, &m.level(n_sym, 0), t.irrep(label).unwrap(), &t).unwrap();
        let target = level_vector_from_hermite_products(&m, n_sym, &combo).unwrap();
        let r = span_residual(&set.vectors, &target);
        c.check(r < 1e-8, format!("n_sym={n_sym} {label}: residual {r:e}"));
    }
    c.finish();
}

#[test]
fn criterion_04_irrep_content_n4() {
    let mut c = Criterion::new(4, "N=4 level irrep content, A2 onset at n_sym=6, degeneracy formula");
    let m = make_model(4, 0.1).unwrap();
    let t = character_table(4).unwrap();
    let expected = [
        (1, expect(&[("T2", 1)])),
        (2, expect(&[("A1", 1), ("E", 1), ("T2", 1)])),
        (3, expect(&[("A1", 1), ("E", 1), ("T1", 1), ("T2", 1)])),
    ];
    for (n_sym, want) in expected {
        let got = mults(&m, &t, n_sym);
        c.check(got == want, format!("n_sym={n_sym}: expected {want:?}, got {got:?}"));
    }
    for n_sym in 0..=6 {
        let a2 = decompose_level(&m, &m.level(n_sym, 0), &t).unwrap().irrep_mults["A2"];
        let ok = if n_sym < 6 { a2 == 0 } else { a2 >= 1 };
        c.check(ok, format!("n_sym={n_sym}: A2 multiplicity {a2}"));
    }
    for n_sym in 0..=10 {
        let d = m.level(n_sym, 0).degeneracy;
        c.check(d == (n_sym + 1) * (n_sym + 2) / 2, format!("n_sym={n_sym}: degeneracy {d}"));
    }
    c.finish();
}

#[test]
fn criterion_05_spin_structure() {
    let mut c = Criterion::new(5, "multiplet tables for three and four spins");
    let t3 = multiplet_table(3).unwrap();
    c.check(t3.count(HalfInt(3)) == 1 && t3.count(HalfInt(1)) == 2 && t3.0.len() == 2, format!("N=3 {t3:?}"));
    let t4 = multiplet_table(4).unwrap();
    c.check(
        t4.count(HalfInt(4)) == 1 && t4.count(HalfInt(2)) == 3 && t4.count(HalfInt(0)) == 2 && t4.0.len() == 3,
        format!("N=4 {t4:?}"),
    );
    c.finish();
}

#[test]
fn criterion_06_allowed_irreps() {
    let mut c = Criterion::new(6, "allowed irreps and spins; character and constructive routes agree");
    let want: [(usize, SpinRows); 2] = [
        (3, &[("A1", &[]), ("A2", &[3]), ("E", &[1])]),
        (4, &[("A1", &[]), ("A2", &[4]), ("E", &[0]), ("T1", &[2]), ("T2", &[])]),
    ];
    for (n, rows) in want {
        let t = character_table(n).unwrap();
        let chars = allowed_by_characters(&t).unwrap();
        for (label, spins) in rows {
            let got: Vec<i32> = chars.get(label).map(|e| e.spins.iter().map(|s| s.0).collect()).unwrap_or_default();
            c.check(got == *spins, format!("N={n} {label}: twice spins {got:?}"));
        }
        let m = make_model(n, 0.1).unwrap();
        let built = allowed_by_construction(&m, 6).unwrap();
        c.check(built == chars, format!("N={n}: constructive {built:?} vs characters {chars:?}"));
    }
    c.finish();
}

fn e00j(m: &OscillatorModel, j: usize) -> f64 {
    m.level_energy(0, j)
}

#[test]
fn criterion_07_missing_levels_n3() {
    let mut c = Criterion::new(7, "N=3 CI converges to allowed levels and never to E00j");
    let m = make_model(3, 0.1).unwrap();
    let half = run_ci(&m, 10, Some(HalfInt(1))).unwrap();
    let target = 2.0 * 0.9f64.sqrt() + 0.5 * 1.2f64.sqrt();
    let lowest = half.eigenvalues[0];
    c.check((lowest - target).abs() < 1e-4, format!("lowest {lowest} vs {target}"));

    let (code, json) =
        cli(&["compare", "--n", "3", "--xi", "0.1", "--orbitals", "10", "--max-quanta", "4", "--tol", "1e-4"]);
    c.check(code == 0, format!("compare exit code {code}"));
    let report = &json["result"];
    let horizon = report["horizon"].as_f64().unwrap_or(f64::NEG_INFINITY);
    let full = run_ci(&m, 10, None).unwrap();
    let mut j = 0;
    while e00j(&m, j) < horizon {
        let e = e00j(&m, j);
        let close = full.eigenvalues.iter().filter(|&&x| (x - e).abs() < 0.05).count();
        c.check(close == 0, format!("{close} CI eigenvalues within 0.05 of E00{j} = {e}"));
        j += 1;
    }
    c.check(j >= 5, format!("only {j} E00j levels below the horizon {horizon}"));
    let missing = quanta_keys(&report["missing"]);
    for k in 0..=4 {
        c.check(missing.contains(&(0, k)), format!("(0,0,{k}) not in missing {missing:?}"));
    }
    c.check(report["spurious"].as_array().is_some_and(Vec::is_empty), "spurious states reported");
    c.finish();
}

#[test]
fn criterion_08_missing_levels_n4() {
    let mut c = Criterion::new(8, "N=4 CI ground state is a singlet at n_sym=2; n_sym=0,1 levels missing");
    let m = make_model(4, 0.1).unwrap();
    let res = run_ci(&m, 8, None).unwrap();
    let lowest = res.lowest().unwrap();
    let target = 3.5 * 0.9f64.sqrt() + 0.5 * 1.3f64.sqrt();
    c.check(lowest.s == HalfInt(0), format!("lowest S = {}", lowest.s));
    c.check((lowest.energy - target).abs() < 5e-3, format!("lowest {} vs {target}", lowest.energy));

    let (code, json) =
        cli(&["compare", "--n", "4", "--xi", "0.1", "--orbitals", "8", "--max-quanta", "4", "--tol", "5e-3"]);
    c.check(code == 0, format!("compare exit code {code}"));
    let missing = quanta_keys(&json["result"]["missing"]);
    for key in [(0, 0), (1, 0)] {
        c.check(missing.contains(&key), format!("{key:?} not in missing {missing:?}"));
    }
    let first_matched = &json["result"]["matched"][0];
    c.check(
        first_matched["quanta_key"] == serde_json::json!([2, 0]) && first_matched["S"] == "0",
        format!("first matched {first_matched}"),
    );
    c.finish();
}

#[test]
fn criterion_09_oracle_equivalence() {
    let mut c = Criterion::new(9, "product-basis oracle spectrum; Slater–Condon matches first quantization");
    let m = make_model(3, 0.1).unwrap();
    let oracle = product_basis_oracle(&m, 8).unwrap();
    c.check((oracle[0].energy - 1.4964059).abs() < 1e-5, format!("E000 {}", oracle[0].energy));
    let exact = enumerate_levels(&m, 3);
    for (o, l) in oracle.iter().zip(exact.iter().take(6)) {
        c.check(
            (o.energy - l.energy).abs() < 1e-5 && o.degeneracy == l.degeneracy,
            format!("oracle {o:?} vs level {:?} at {}", l.key(), l.energy),
        );
    }
    let basis = build_basis(3, 4, None).unwrap();
    let sc = hamiltonian_matrix(&m, &basis).unwrap();
    let fq = first_quantized_ci_matrix(&m, 4, &basis).unwrap();
    let diff = (&sc - &fq).amax();
    c.check(basis.len() == 56, format!("basis size {}", basis.len()));
    c.check(diff < 1e-10, format!("max entry difference {diff:e}"));
    c.finish();
}

fn regular_projectors_ok(t: &CharacterTable) -> Result<(), String> {
    let projectors: Vec<Vec<Vec<Rational>>> = t.irreps.iter().map(|g| t.regular_projector(g).unwrap()).collect();
    let size = t.order();
    let zero = vec![vec![Rational::from_integer(0); size]; size];
    let mut sum = zero.clone();
    for (a, pa) in projectors.iter().enumerate() {
        for (b, pb) in projectors.iter().enumerate() {
            let prod = rational_matmul(pa, pb);
            let want = if a == b { pa } else { &zero };
            if &prod != want {
                return Err(format!("P{a}·P{b} wrong for N={}", t.n));
            }
        }
        for (i, row) in pa.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                sum[i][j] += x;
            }
        }
    }
    if sum != rational_identity(size) {
        return Err(format!("projectors do not sum to identity for N={}", t.n));
    }
    Ok(())
}

fn homomorphism_error(n: usize, max_n_sym: usize) -> f64 {
    let m = make_model(n, 0.1).unwrap();
    let mut worst: f64 = 0.0;
    for n_sym in 0..=max_n_sym {
        let rep = level_representation(&m, &m.level(n_sym, 0)).unwrap();
        for (p, dp) in &rep {
            for (q, dq) in &rep {
                let pq = p.compose(q).unwrap();
                let dpq = &rep.iter().find(|(r, _)| *r == pq).unwrap().1;
                worst = worst.max((dp * dq - dpq).amax());
            }
        }
    }
    worst
}

fn s_squared_ok(res: &CiResult) -> f64 {
    res.states.iter().map(|s| (s.s_squared - s.s.casimir()).abs()).fold(0.0, f64::max)
}

#[test]
fn criterion_10_property_suites() {
    let mut c = Criterion::new(10, "projectors exact, D(p)D(q)=D(pq), variational monotonicity, pure spins");
    for n in [3, 4] {
        if let Err(e) = regular_projectors_ok(&character_table(n).unwrap()) {
            c.check(false, e);
        }
    }
    for n in [3, 4] {
        let err = homomorphism_error(n, 6);
        c.check(err < 1e-9, format!("N={n}: homomorphism error {err:e}"));
    }
    let m = make_model(3, 0.1).unwrap();
    let floor = 2.0 * 0.9f64.sqrt() + 0.5 * 1.2f64.sqrt();
    let mut previous = f64::INFINITY;
    for orbitals in [4, 6, 8, 10] {
        let res = run_ci(&m, orbitals, None).unwrap();
        let e = res.eigenvalues[0];
        c.check(e <= previous + 1e-12, format!("M={orbitals}: {e} above M-2 value {previous}"));
        c.check(e >= floor - 1e-10, format!("M={orbitals}: {e} below lowest allowed level {floor}"));
        previous = e;
        let dev = s_squared_ok(&res);
        c.check(dev < 1e-6, format!("N=3 M={orbitals}: ⟨S²⟩ deviation {dev:e}"));
    }
    let m4 = make_model(4, 0.1).unwrap();
    let res = run_ci(&m4, 8, None).unwrap();
    let dev = s_squared_ok(&res);
    c.check(dev < 1e-6, format!("N=4 M=8: ⟨S²⟩ deviation {dev:e}"));
    let orth = (res.eigenvectors.transpose() * &res.eigenvectors
        - DMatrix::identity(res.eigenvalues.len(), res.eigenvalues.len()))
    .amax();
    c.check(orth < 1e-10, format!("N=4 M=8: eigenvector orthonormality {orth:e}"));
    c.finish();
}
