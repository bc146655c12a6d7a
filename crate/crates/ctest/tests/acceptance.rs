//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test --release -p ctest --test acceptance`.

mod common;

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use ctest::harness::{run_suite, SmallConfig};
use ctest_core::construct::{build_u, build_w2};
use ctest_core::group::{conjugator_tuple, conjugator_word};
use ctest_core::oracle::{equal_mc, eval_int_word, OracleConfig};
use ctest_core::{Expr, Rank, Word};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const L_W2: usize = 115_200;
const L_U: usize = 633_604;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn clean_suite(name: &str, cfg: &SmallConfig) -> Result<String, String> {
    let r = run_suite(name, 1, cfg).map_err(|e| e.to_string())?;
    ensure(r.cases == cfg.cases && r.passes == r.cases, || format!("{name}: {}/{} passes", r.passes, r.cases))?;
    ensure(r.findings.is_empty(), || format!("{name}: {:?}", r.findings))?;
    ensure(r.error_bound_total < 1e-12, || format!("{name}: aggregate bound {}", r.error_bound_total))?;
    Ok(format!("{name} {}/{} bound {:e}", r.passes, r.cases, r.error_bound_total))
}

fn exponent_forms() -> Check {
    let cfg = SmallConfig::default();
    Ok(format!("{}; {}", clean_suite("lemma10_forms", &cfg)?, clean_suite("lemma13_forms", &cfg)?))
}

fn cyclic_iff_trivial() -> Check {
    clean_suite("theorem_cyclic_iff_trivial", &SmallConfig { cases: 100, ..SmallConfig::default() })
}

fn blocks(c: &[i32], seps: [Vec<i32>; 8]) -> Vec<i32> {
    let mut out = Vec::new();
    for (i, s) in seps.iter().enumerate() {
        for _ in 0..100 * (i + 1) {
            out.extend_from_slice(c);
        }
        out.extend_from_slice(s);
    }
    naive_reduce(&out)
}

fn naive_w2(a: &[i32], b: &[i32]) -> Vec<i32> {
    let c = naive_comm(&naive_pow(a, 8), &naive_pow(b, 8));
    let (ai, bi) = (naive_inv(a), naive_inv(b));
    blocks(&c, [a.to_vec(), a.to_vec(), ai.clone(), ai, b.to_vec(), b.to_vec(), bi.clone(), bi])
}

fn naive_u(a: &[i32], b: &[i32]) -> Vec<i32> {
    let d = naive_comm(&naive_pow(a, 48), &naive_pow(b, 40));
    let (a6, b5) = (naive_pow(a, 6), naive_pow(b, 5));
    blocks(&d, [a6.clone(), a6.clone(), a6.clone(), a6, b5.clone(), b5.clone(), b5.clone(), b5])
}

/// Whether the cyclic core of `v` has a proper period dividing its length.
fn naive_proper_power(v: &[i32]) -> bool {
    let n = naive_cyclic_len(v);
    let start = (v.len() - n) / 2;
    let core = &v[start..start + n];
    (1..n).any(|d| n % d == 0 && (d..n).all(|i| core[i] == core[i - d]))
}

fn expansions() -> Check {
    let (a, b) = (Expr::generator(1), Expr::generator(2));
    let mut notes = Vec::new();
    for (name, e, naive, pinned) in
        [("w2", build_w2(&a, &b), naive_w2(&[1], &[2]), L_W2), ("u", build_u(&a, &b), naive_u(&[1], &[2]), L_U)]
    {
        let w = e.expand(1 << 22).map_err(|_| format!("{name} exceeds budget"))?;
        ensure(!w.is_empty(), || format!("{name} is empty"))?;
        ensure(naive.len() == pinned && w.len() == pinned, || format!("{name}: length {} vs {pinned}", w.len()))?;
        ensure(*e.len() == BigUint::from(pinned), || format!("{name}: stored length"))?;
        ensure(to_ints(&w) == naive, || format!("{name}: expansion differs from naive construction"))?;
        ensure(!naive_proper_power(&naive) && !w.is_proper_power(), || format!("{name} is a proper power"))?;
        notes.push(format!("|{name}| = {pinned}"));
    }
    Ok(notes.join(", "))
}

fn reduced<R: Rng>(rng: &mut R, m: i32, max: usize) -> Vec<i32> {
    let len = rng.gen_range(0..=max);
    let mut v = naive_reduce(&random_raw(rng, m, len));
    v.truncate(max);
    v
}

fn conj(s: &[i32], x: &[i32]) -> Vec<i32> {
    naive_cat(&[s, x, &naive_inv(s)])
}

fn conjugacy() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let words = |v: &[Vec<i32>]| v.iter().map(|w| from_ints(w)).collect::<Vec<Word>>();
    for case in 0..1000 {
        let m = rng.gen_range(2..=3);
        let arity = rng.gen_range(1..=4);
        let xs: Vec<Vec<i32>> = (0..arity).map(|_| reduced(&mut rng, m, 20)).collect();
        let s = reduced(&mut rng, m, 20);
        let ys: Vec<Vec<i32>> = xs.iter().map(|x| naive_reduce(&conj(&s, x))).collect();
        let found = conjugator_tuple(&words(&xs), &words(&ys)).map_err(|e| e.to_string())?;
        let t = found.ok_or_else(|| format!("conjugate case {case} missed: {xs:?} -> {ys:?}"))?;
        let t = to_ints(&t);
        ensure(xs.iter().zip(&ys).all(|(x, y)| conj(&t, x) == *y), || format!("case {case}: bad conjugator {t:?}"))?;
    }
    let mut negatives = 0;
    while negatives < 1000 {
        let m = rng.gen_range(2..=3);
        let (xs, ys) = if negatives % 2 == 0 {
            // one coordinate has a different cyclic length, so it is not even conjugate alone
            let arity = rng.gen_range(1..=4);
            let xs: Vec<Vec<i32>> = (0..arity).map(|_| reduced(&mut rng, m, 20)).collect();
            let s = reduced(&mut rng, m, 20);
            let mut ys: Vec<Vec<i32>> = xs.iter().map(|x| conj(&s, x)).collect();
            let j = rng.gen_range(0..arity);
            let other = reduced(&mut rng, m, 20);
            if naive_cyclic_len(&other) == naive_cyclic_len(&xs[j]) {
                continue;
            }
            ys[j] = conj(&s, &other);
            (xs, ys)
        } else {
            // coordinates conjugate one at a time; the products are not conjugate
            let xs: Vec<Vec<i32>> = (0..2).map(|_| reduced(&mut rng, m, 20)).collect();
            let ys: Vec<Vec<i32>> = xs.iter().map(|x| conj(&reduced(&mut rng, m, 20), x)).collect();
            if naive_cyclic_len(&naive_cat(&[&xs[0], &xs[1]])) == naive_cyclic_len(&naive_cat(&[&ys[0], &ys[1]])) {
                continue;
            }
            (xs, ys)
        };
        let found = conjugator_tuple(&words(&xs), &words(&ys)).map_err(|e| e.to_string())?;
        ensure(found.is_none(), || format!("non-conjugate pair accepted: {xs:?} -> {ys:?} via {found:?}"))?;
        negatives += 1;
    }
    let all = all_reduced_upto(2, 6);
    let conjugators: Vec<&Vec<i32>> = all.iter().filter(|s| s.len() <= 4).collect();
    let parsed: Vec<Word> = all.iter().map(|w| from_ints(w)).collect();
    let mut reachable_pairs = 0;
    for (x, wx) in all.iter().zip(&parsed) {
        let orbit: HashSet<Vec<i32>> = conjugators.iter().map(|s| conj(s, x)).collect();
        for (y, wy) in all.iter().zip(&parsed) {
            let found = conjugator_word(wx, wy);
            if orbit.contains(y) {
                reachable_pairs += 1;
                let t = found.ok_or_else(|| format!("brute force conjugates {x:?} to {y:?}, search did not"))?;
                ensure(conj(&to_ints(&t), x) == *y, || format!("bad conjugator for {x:?} -> {y:?}"))?;
            } else if let Some(t) = found {
                ensure(conj(&to_ints(&t), x) == *y, || format!("bad conjugator for {x:?} -> {y:?}"))?;
            }
        }
    }
    Ok(format!("1000 conjugate, 1000 non-conjugate, {reachable_pairs} brute-force pairs"))
}

fn corollary() -> Check {
    clean_suite("corollary2_demo", &SmallConfig::default())
}

fn oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for case in 0..1000 {
        let m = rng.gen_range(2..=4);
        let rank = Rank::new(m as u32).unwrap();
        let cfg = OracleConfig { seed: rng.gen(), ..OracleConfig::default() };
        let a = reduced(&mut rng, m, 30);
        let (ea, eb, equal) = if case % 2 == 0 {
            // same element, assembled differently
            let cut = rng.gen_range(0..=a.len());
            let pad = reduced(&mut rng, m, 10);
            let left = naive_cat(&[&a[..cut], &pad]);
            let right = naive_cat(&[&naive_inv(&pad), &a[cut..]]);
            (Expr::lit(&from_ints(&a)), Expr::lit(&from_ints(&left)).cat(&Expr::lit(&from_ints(&right))), true)
        } else {
            let b = reduced(&mut rng, m, 30);
            (Expr::lit(&from_ints(&a)), Expr::lit(&from_ints(&b)), a == b)
        };
        let v = equal_mc(&ea, &eb, rank, &cfg).map_err(|e| e.to_string())?;
        ensure(v.is_probably_equal() == equal, || format!("case {case}: {a:?} gave {v:?}, expected equal = {equal}"))?;
    }
    let rank = Rank::new(2).unwrap();
    let words = all_reduced_upto(2, 8);
    for w in &words[1..] {
        let img = eval_int_word(&from_ints(w), rank).map_err(|e| e.to_string())?;
        ensure(!img.is_identity(), || format!("{w:?} maps to the identity"))?;
    }
    Ok(format!("1000 explicit pairs, {} nontrivial words faithful", words.len() - 1))
}

const MIRROR_MAX: usize = 10_000;

fn mirror() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut letters = 0usize;
    for program in 0..10_000 {
        let m = rng.gen_range(2..=3);
        let mut vals: Vec<(Expr, Vec<i32>)> = vec![(Expr::generator(1), vec![1]), (Expr::generator(2), vec![2])];
        for _ in 0..rng.gen_range(1..=12) {
            let i = rng.gen_range(0..vals.len());
            let j = rng.gen_range(0..vals.len());
            let ((ea, wa), (eb, wb)) = (vals[i].clone(), vals[j].clone());
            let next = match rng.gen_range(0..6) {
                0 => {
                    let len = rng.gen_range(0..20);
                    let w = naive_reduce(&random_raw(&mut rng, m, len));
                    (Expr::lit(&from_ints(&w)), w)
                }
                1 => (ea.cat(&eb), naive_cat(&[&wa, &wb])),
                2 => (ea.inv(), naive_inv(&wa)),
                3 => {
                    let k = rng.gen_range(-40i64..=40);
                    if wa.len() * k.unsigned_abs() as usize > MIRROR_MAX {
                        continue;
                    }
                    (ea.pow(k), naive_pow(&wa, k))
                }
                4 => (Expr::comm(&ea, &eb), naive_comm(&wa, &wb)),
                _ => {
                    let s = rng.gen_range(0..=wa.len());
                    let t = rng.gen_range(s..=wa.len());
                    (ea.slice(&BigUint::from(s), &BigUint::from(t)), naive_reduce(&wa[s..t]))
                }
            };
            if next.1.len() <= MIRROR_MAX {
                vals.push(next);
            }
        }
        for (e, w) in &vals {
            ensure(*e.len() == BigUint::from(w.len()), || format!("program {program}: length mismatch"))?;
        }
        let (e, w) = vals.last().unwrap();
        let got = e.expand(MIRROR_MAX as u64).map_err(|_| format!("program {program}: expansion over budget"))?;
        ensure(to_ints(&got) == *w, || format!("program {program}: expansion differs"))?;
        letters += w.len();
    }
    Ok(format!("10000 programs, {letters} letters compared"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check, u64); 7] = [
        ("exponent forms clean at default config", exponent_forms, 300),
        ("v_n trivial iff cyclic, 100 cases per n", cyclic_iff_trivial, 300),
        ("w2 and u expand to pinned non-power words", expansions, 30),
        ("conjugator recovery sound and complete", conjugacy, 120),
        ("C-test conjugacy corollary", corollary, 300),
        ("matrix oracle sound and faithful", oracle, 60),
        ("expressions mirror explicit words", mirror, 60),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let result = result.and_then(|note| {
            if took > Duration::from_secs(limit) {
                Err(format!("{note}; took {:.1} s, limit {limit} s", took.as_secs_f64()))
            } else {
                Ok(note)
            }
        });
        match result {
            Ok(note) => println!("PASS {} {name}: {note} ({:.1} s)", i + 1, took.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} ({:.1} s)", i + 1, took.as_secs_f64());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
