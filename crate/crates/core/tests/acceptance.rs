//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Run alone with `cargo test --test acceptance`.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use mconv_core::convolution::{build_ambient, expected_rank, mc};
use mconv_core::fields::{Field, FiniteField};
use mconv_core::group::{burnside_dimension, enumerate_group, reduce_tuple_to};
use mconv_core::linalg::{inverse, simultaneous_conjugacy, Matrix};
use mconv_core::pipeline::{run_pipeline, PipelineConfig};
use mconv_core::tuples::{construct_t, MonodromyTuple};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// `mc(mc(t))` conjugate to `t`, with the witness checked entry by entry.
fn involution_holds<F: Field>(t: &MonodromyTuple<F>) -> Result<(), String> {
    let f = t.field();
    let minus = f.neg(&f.one());
    let once = mc(t, &minus).map_err(|e| e.to_string())?;
    let twice = mc(&once, &minus).map_err(|e| e.to_string())?;
    if twice.n() != t.n() {
        return Err(format!("rank {} after two steps, started at {}", twice.n(), t.n()));
    }
    let x = simultaneous_conjugacy(twice.entries(), t.entries()).ok_or("no witness")?;
    let xi = inverse(&x).map_err(|e| e.to_string())?;
    for (a, b) in twice.entries().iter().zip(t.entries()) {
        if x.mul(a).mul(&xi) != *b {
            return Err("witness does not conjugate".into());
        }
    }
    Ok(())
}

fn ranks() -> Outcome {
    let table: [((u64, usize), [usize; 4]); 3] = [
        ((4, 9), [27, 25, 26, 24]),
        ((4, 10), [31, 29, 30, 28]),
        ((6, 10), [31, 29, 30, 28]),
    ];
    let mut bad = Vec::new();
    for ((m, r), want) in table {
        for (family, &expected) in (1u8..=4).zip(want.iter()) {
            match run_pipeline(&PipelineConfig::new(family, m, r)) {
                Ok(rep) if rep.rank == expected => {}
                Ok(rep) => bad.push(format!("family {family} at ({m},{r}): {} != {expected}", rep.rank)),
                Err(e) => bad.push(format!("family {family} at ({m},{r}): {e}")),
            }
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "12 ranks exact".into() } else { bad.join("; ") })
}

fn jordan_tables() -> Outcome {
    let mut bad = Vec::new();
    let mut entries = 0;
    for family in 1..=4 {
        match run_pipeline(&PipelineConfig::new(family, 4, 9)) {
            Ok(rep) => {
                entries += rep.oracle.len();
                for e in rep.oracle.iter().filter(|e| !e.matches) {
                    bad.push(format!("family {family} entry {}", e.index));
                }
                if rep.oracle.len() != 10 {
                    bad.push(format!("family {family}: {} entries compared", rep.oracle.len()));
                }
            }
            Err(e) => bad.push(format!("family {family}: {e}")),
        }
    }
    // spot check: family 1 entry 8 is (1, -1^26)
    if let Ok(rep) = run_pipeline(&PipelineConfig::new(1, 4, 9)) {
        let blocks = rep.oracle[7].computed["blocks"].as_array().map_or(0, Vec::len);
        if blocks != 2 {
            bad.push(format!("family 1 entry 8 has {blocks} block types"));
        }
    }
    outcome(bad.is_empty(), format!("{entries} entries compared; mismatches: {bad:?}"))
}

fn involution(rng: &mut ChaCha8Rng) -> Outcome {
    let mut bad = Vec::new();
    for (m, r) in [(4, 9), (6, 10)] {
        let t = construct_t(m, r).expect("admissible");
        if let Err(e) = involution_holds(&t) {
            bad.push(format!("T_{{{m},{r}}}: {e}"));
        }
    }
    for i in 0..25 {
        let n = rng.gen_range(1..=3);
        let r = rng.gen_range(3..=5);
        let t = common::random_irreducible(n, r, rng);
        if let Err(e) = involution_holds(&t) {
            bad.push(format!("random #{i} (n={n}, r={r}): {e}"));
        }
    }
    outcome(bad.is_empty(), format!("2 named + 25 random tuples; failures: {bad:?}"))
}

fn rank_formula(rng: &mut ChaCha8Rng) -> Outcome {
    let mut bad = Vec::new();
    let lambda_raw = common::P - 1;
    for i in 0..50 {
        let n = rng.gen_range(1..=3);
        let r = rng.gen_range(3..=5);
        let t = common::random_irreducible(n, r, rng);
        let f = t.field();
        let lambda = f.neg(&f.one());
        let out = mc(&t, &lambda).expect("mc");
        let formula = expected_rank(&t, &lambda).expect("formula");
        let ws = build_ambient(&t, &lambda).expect("ambient");
        let (dk, dl, dkl) = common::brute_force_kl(&t, lambda_raw);
        let brute = (r * n - dkl) as i64;
        if out.n() as i64 != formula || formula != brute || ws.k.dim() != dk || ws.l.dim() != dl {
            bad.push(format!(
                "#{i}: rank {} formula {formula} brute {brute} K {}/{dk} L {}/{dl}",
                out.n(),
                ws.k.dim(),
                ws.l.dim()
            ));
        }
    }
    outcome(bad.is_empty(), format!("50 random tuples; failures: {bad:?}"))
}

fn base_change() -> Outcome {
    let t = construct_t(4, 9).expect("admissible");
    let k = t.field();
    let minus = k.neg(&k.one());
    let reduce_then = reduce_tuple_to(&t, 5, 1).and_then(|tr| {
        let f = tr.field().clone();
        mc(&tr, &f.neg(&f.one()))
    });
    let then_reduce = mc(&t, &minus).and_then(|c| reduce_tuple_to(&c, 5, 1));
    match (reduce_then, then_reduce) {
        (Ok(a), Ok(b)) => {
            let conj = a.n() == b.n() && simultaneous_conjugacy(a.entries(), b.entries()).is_some();
            outcome(
                conj && a.n() == 14,
                format!("ranks {} and {}, conjugate over F_5: {conj}", a.n(), b.n()),
            )
        }
        (a, b) => outcome(false, format!("{:?} / {:?}", a.err(), b.err())),
    }
}

fn certificates() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    let cfg = PipelineConfig::new(1, 4, 9).with_q(5);
    match run_pipeline(&cfg) {
        Ok(rep) => {
            let c = &rep.residual.as_ref().expect("residual")["certificate"];
            let ev = |name: &str| c["checks"][name]["evidence"].clone();
            let f5 = FiniteField::new(5, 1).unwrap();
            let bireflection_order = f5
                .decode(&ev("has_bireflection")["eigenvalue"])
                .ok()
                .and_then(|z| f5.element_order(z));
            let checks = [
                ("verdict", c["verdict"] == Value::Bool(true)),
                ("det {1}", ev("determinant_spectrum")["determinants"] == serde_json::json!([[1]])),
                ("burnside 729", ev("absolutely_irreducible")["burnside_dimension"] == 729),
                ("forms 0", ev("no_invariant_bilinear_form")["dimension"] == 0),
                ("bireflection order 4", bireflection_order == Some(4)),
                ("negated reflection", ev("has_negated_reflection")["kind"] == "negated_reflection"),
                ("subfield 5", ev("bireflection_subfield_minimal")["smallest_stable_subfield"] == 5),
            ];
            let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
            ok &= failed.is_empty();
            notes.push(if failed.is_empty() {
                "family 1: sl verdict, det {1}, burnside 729, forms 0, bireflection order 4, subfield 5".into()
            } else {
                format!("family 1 failed: {failed:?}")
            });
        }
        Err(e) => {
            ok = false;
            notes.push(format!("family 1: {e}"));
        }
    }
    for family in [3, 4] {
        let mut cfg = PipelineConfig::new(family, 4, 9).with_q(5);
        cfg.mode = Some("slpm".into());
        match run_pipeline(&cfg) {
            Ok(rep) => {
                let c = &rep.residual.as_ref().expect("residual")["certificate"];
                let dets = &c["checks"]["determinant_spectrum"]["evidence"]["determinants"];
                let pass = rep.verdict() == Some(true) && *dets == serde_json::json!([[1], [4]]);
                ok &= pass;
                notes.push(format!("family {family}: verdict {:?}, determinants {dets}", rep.verdict()));
            }
            Err(e) => {
                ok = false;
                notes.push(format!("family {family}: {e}"));
            }
        }
    }
    outcome(ok, notes.join("; "))
}

/// Common eigenvector of all `gens` over `F_{3^k}`, by exhaustive search
/// over projective points.
fn common_line(gens: &[Vec<Vec<u32>>], big: &FiniteField, n: usize) -> bool {
    let q = big.size() as u32;
    let total = (q as u64).pow(n as u32);
    for code in 1..total {
        let mut v = Vec::with_capacity(n);
        let mut c = code;
        for _ in 0..n {
            v.push((c % q as u64) as u32);
            c /= q as u64;
        }
        // first nonzero coordinate equal to 1 picks one point per line
        if v.iter().find(|x| **x != 0) != Some(&1) {
            continue;
        }
        let stable = gens.iter().all(|g| {
            let w: Vec<u32> = (0..n)
                .map(|i| (0..n).fold(0, |acc, j| big.add(&acc, &big.mul(&g[i][j], &v[j]))))
                .collect();
            // w parallel to v
            (0..n).all(|i| (0..n).all(|j| big.mul(&w[i], &v[j]) == big.mul(&w[j], &v[i])))
        });
        if stable {
            return true;
        }
    }
    false
}

fn tiny_oracles(rng: &mut ChaCha8Rng) -> Outcome {
    let f5 = FiniteField::new(5, 1).unwrap();
    let gens = [Matrix::from_i64(&f5, &[&[1, 1], &[0, 1]]), Matrix::from_i64(&f5, &[&[1, 0], &[1, 1]])];
    let order = enumerate_group(&gens, 1000);

    let f3 = FiniteField::new(3, 1).unwrap();
    let mut disagreements = Vec::new();
    let mut reducible = 0;
    for i in 0..100 {
        let n = rng.gen_range(1..=3usize);
        let count = rng.gen_range(1..=3);
        // zero-heavy entries make reducible sets common enough to matter
        let sparse = rng.gen_bool(0.5);
        let raw: Vec<Vec<Vec<u32>>> = (0..count)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        (0..n)
                            .map(|_| if sparse && rng.gen_bool(0.6) { 0 } else { rng.gen_range(0..3) })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let mats: Vec<Matrix<FiniteField>> =
            raw.iter().map(|g| Matrix::from_fn(&f3, n, n, |a, b| g[a][b])).collect();
        let burnside_irreducible = burnside_dimension(&mats) == n * n;
        // absolutely irreducible iff no invariant proper subspace over F_{3^n};
        // for n <= 3 every proper one has dimension 1 or codimension 1
        let big = FiniteField::new(3, n as u32).unwrap();
        let lift: Vec<Vec<Vec<u32>>> =
            raw.iter().map(|g| g.iter().map(|row| row.iter().map(|&x| big.from_u64(x as u64)).collect()).collect()).collect();
        let transposed: Vec<Vec<Vec<u32>>> =
            lift.iter().map(|g| (0..n).map(|i| (0..n).map(|j| g[j][i]).collect()).collect()).collect();
        let exhaustive_irreducible = n == 1 || !(common_line(&lift, &big, n) || common_line(&transposed, &big, n));
        if !exhaustive_irreducible {
            reducible += 1;
        }
        if burnside_irreducible != exhaustive_irreducible {
            disagreements.push(i);
        }
    }
    outcome(
        order == Some(120) && disagreements.is_empty(),
        format!(
            "group order {order:?}; 100 sets ({reducible} reducible), disagreements {disagreements:?}"
        ),
    )
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d63_6f6e);
    let start = Instant::now();
    let mut all = true;
    let mut report = |i: usize, name: &str, o: Outcome| {
        all &= o.pass;
        println!("criterion {i} {name}: {} ({})", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    };
    report(1, "family ranks", ranks());
    report(2, "Jordan tables", jordan_tables());
    report(3, "involution", involution(&mut rng));
    report(4, "rank formula oracle", rank_formula(&mut rng));
    report(5, "base change", base_change());
    report(6, "residual certificate", certificates());
    report(7, "tiny-scale oracles", tiny_oracles(&mut rng));
    println!(
        "criterion 8 group equality: NOT REPRODUCIBLE (stated; the claim that the monodromy group equals \
         SL_n over the residue ring for n around 27 needs a group of order about 10^470 and sheaf-theoretic \
         arguments, so criterion 6 checks the hypotheses instead)"
    );
    println!("acceptance finished in {:.1}s", start.elapsed().as_secs_f64());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
