//! Named, seeded verification suites.
//!
//! Every case draws its inputs from its own ChaCha stream, so a report depends
//! only on `(suite, seed, scale)` and cases may run in parallel.

use std::time::Instant;

use ctest_core::construct::{build_u, build_v, build_w2, corollary_words, ExponentTable};
use ctest_core::endo::{inner, substitute, Endo};
use ctest_core::group::{commutes, conjugate, conjugator_tuple, is_cyclic_tuple};
use ctest_core::oracle::{equal_mc, EqualityVerdict, OracleConfig};
use ctest_core::{Expr, Rank, Word};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::report::{Finding, Report};
use crate::sampling;
use crate::{Error, Result};

/// Work allowed to the exact certificate per comparison.
pub const CERTIFY_STEPS: u64 = 1_000_000;

/// Sizes used by the suites.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmallConfig {
    pub cases: usize,
    /// Maximum length of sampled lemma inputs.
    pub max_len: usize,
    /// Maximum length of sampled conjugators.
    pub conj_len: usize,
    /// Largest denotation expanded for exact checks.
    pub expand_limit: u64,
    pub oracle: OracleConfig,
    pub parallel: bool,
}

impl Default for SmallConfig {
    fn default() -> Self {
        SmallConfig {
            cases: 25,
            max_len: 8,
            conj_len: 4,
            expand_limit: 8_000_000,
            oracle: OracleConfig::default(),
            parallel: true,
        }
    }
}

impl SmallConfig {
    pub fn tiny() -> Self {
        SmallConfig { cases: 6, max_len: 4, conj_len: 3, expand_limit: 2_000_000, ..SmallConfig::default() }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SuiteInfo {
    pub name: &'static str,
    pub claim: &'static str,
    /// The statement being checked, quoted.
    pub anchor: &'static str,
}

type CaseFn = fn(&mut Case, &mut ChaCha8Rng, &SmallConfig);

struct Suite {
    info: SuiteInfo,
    run: CaseFn,
}

const SUITES: &[Suite] = &[
    Suite {
        info: SuiteInfo {
            name: "lemma1",
            claim: "non-cyclic pairs give a non-empty v_2 that is not a proper power; cyclic pairs give the identity",
            anchor: "neither equal to the empty word nor a proper power",
        },
        run: lemma1,
    },
    Suite {
        info: SuiteInfo {
            name: "lemma3",
            claim: "v_2(X)^-1 differs from v_2(Y) whenever <X1, X2> is non-cyclic",
            anchor: "v_2(X_1, X_2)^{-1} != v_2(Y_1, Y_2)",
        },
        run: lemma3,
    },
    Suite {
        info: SuiteInfo {
            name: "lemma4",
            claim: "u(W^a, W^b) = W^(24a+20b), empty iff 6a = -5b; non-cyclic pairs give a non-empty non-power",
            anchor: "provided X_1^6 = X_2^{-5}",
        },
        run: lemma4,
    },
    Suite {
        info: SuiteInfo {
            name: "lemma7",
            claim: "for non-cyclic pairs neither X_i commutes with u(X1, X2)",
            anchor: "<X_i, u(X_1, X_2)> is also non-cyclic",
        },
        run: lemma7,
    },
    Suite {
        info: SuiteInfo {
            name: "lemma9",
            claim: "u(v_2(X), v_2(Y)) = 1 exactly when v_2(X) = 1 and v_2(Y) = 1",
            anchor: "v_2(X_1, X_2) = 1 and v_2(Y_1, Y_2) = 1",
        },
        run: lemma9,
    },
    Suite {
        info: SuiteInfo {
            name: "lemma10_forms",
            claim: "v_3 with one trivial argument is v_2^960, v_2^400 or v_2^576",
            anchor: "v_3(X_1, X_2, X_3) = v_2(X_2, X_3)^{960}",
        },
        run: lemma10_forms,
    },
    Suite {
        info: SuiteInfo {
            name: "lemma13_forms",
            claim: "degenerate v_4 and v_5 are powers of v_2 with exponents 960*400^(n-3), 400^(n-2), 576*400^(n-3); v_4(W, X2, W, W) = v_3^1936",
            anchor: "v_3(X_1, X_2, X_3)^{1936}",
        },
        run: lemma13_forms,
    },
    Suite {
        info: SuiteInfo {
            name: "theorem_cyclic_iff_trivial",
            claim: "v_n(X) = 1 iff <X1, ..., Xn> is cyclic, n = 2..5",
            anchor: "if and only if the subgroup generated by X_1, ..., X_n is cyclic",
        },
        run: theorem_cyclic_iff_trivial,
    },
    Suite {
        info: SuiteInfo {
            name: "ctest_conjugacy_recovery",
            claim: "for Y = S X S^-1 the values v_n(Y) and S v_n(X) S^-1 agree and a conjugator is recovered",
            anchor: "Y_i = S X_i S^{-1} for all i",
        },
        run: ctest_conjugacy_recovery,
    },
    Suite {
        info: SuiteInfo {
            name: "substitution_equivariance",
            claim: "v_n(S X S^-1) = S v_n(X) S^-1 for n = 2, 3, 4",
            anchor: "word maps commute with simultaneous conjugation",
        },
        run: substitution_equivariance,
    },
    Suite {
        info: SuiteInfo {
            name: "corollary2_demo",
            claim: "phi = tau_S psi with S a power of psi(u1) agrees with psi on u1 and differs on u2",
            anchor: "uniquely determined by psi(u_1), psi(u_2)",
        },
        run: corollary2_demo,
    },
];

pub fn list_suites() -> Vec<SuiteInfo> {
    SUITES.iter().map(|s| s.info).collect()
}

pub fn run_suite(name: &str, seed: u64, scale: &SmallConfig) -> Result<Report> {
    let suite = SUITES.iter().find(|s| s.info.name == name).ok_or_else(|| Error::UnknownSuite(name.into()))?;
    let start = Instant::now();
    let stream_key = name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    let one = |i: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ stream_key);
        rng.set_stream(i as u64);
        let mut cfg = *scale;
        cfg.oracle.seed = rng.gen();
        let mut case = Case::default();
        (suite.run)(&mut case, &mut rng, &cfg);
        case
    };
    let cases: Vec<Case> = if scale.parallel {
        (0..scale.cases).into_par_iter().map(one).collect()
    } else {
        (0..scale.cases).map(one).collect()
    };
    let mut report = Report {
        suite: name.into(),
        seed,
        cases: scale.cases,
        passes: 0,
        findings: Vec::new(),
        error_bound_total: 0.0,
        millis: 0,
    };
    for (i, c) in cases.into_iter().enumerate() {
        match c.failure {
            None => {
                report.passes += 1;
                report.error_bound_total += c.bound;
            }
            Some(f) => report.findings.push(Finding {
                case: i,
                inputs: c.inputs,
                claim: f.claim,
                observed: f.observed,
                error_bound: f.error_bound,
            }),
        }
    }
    report.millis = start.elapsed().as_millis() as u64;
    Ok(report)
}

// ---------------------------------------------------------------------------
// case bookkeeping

struct Failure {
    claim: String,
    observed: String,
    error_bound: Option<f64>,
}

/// Checks of one case. After the first failure further checks are skipped.
#[derive(Default)]
struct Case {
    inputs: Vec<String>,
    bound: f64,
    failure: Option<Failure>,
}

impl Case {
    fn input(&mut self, label: &str, w: &Word) {
        self.inputs.push(format!("{label} = {w}"));
    }

    fn inputs(&mut self, label: &str, ws: &[Word]) {
        for (i, w) in ws.iter().enumerate() {
            self.input(&format!("{label}{}", i + 1), w);
        }
    }

    fn failed(&self) -> bool {
        self.failure.is_some()
    }

    fn fail(&mut self, claim: &str, observed: String, error_bound: Option<f64>) {
        if self.failure.is_none() {
            self.failure = Some(Failure { claim: claim.into(), observed, error_bound });
        }
    }

    fn check(&mut self, ok: bool, claim: &str, observed: impl FnOnce() -> String) {
        if !self.failed() && !ok {
            self.fail(claim, observed(), None);
        }
    }

    /// Equality via the matrix oracle, then the exact certificate; only an
    /// uncertified pass contributes its error bound.
    fn expect_equal(&mut self, lhs: &Expr, rhs: &Expr, rank: Rank, oracle: &OracleConfig, claim: &str) {
        if self.failed() {
            return;
        }
        match equal_mc(lhs, rhs, rank, oracle) {
            Ok(EqualityVerdict::ProbablyEqual { error_bound }) => match lhs.certify_equal(rhs, CERTIFY_STEPS) {
                Some(true) => {}
                Some(false) => self.fail(claim, "Unequal (exact comparison)".into(), None),
                None => self.bound += error_bound,
            },
            Ok(EqualityVerdict::DefinitelyUnequal { prime }) => {
                self.fail(claim, format!("DefinitelyUnequal (separated modulo {prime})"), None)
            }
            Err(e) => self.fail(claim, format!("error: {e}"), None),
        }
    }

    fn expect_unequal(&mut self, lhs: &Expr, rhs: &Expr, rank: Rank, oracle: &OracleConfig, claim: &str) {
        if self.failed() {
            return;
        }
        match equal_mc(lhs, rhs, rank, oracle) {
            Ok(EqualityVerdict::DefinitelyUnequal { .. }) => {}
            Ok(EqualityVerdict::ProbablyEqual { error_bound }) => {
                let observed = format!("ProbablyEqual after {} primes (inconclusive)", oracle.prime_count);
                self.fail(claim, observed, Some(error_bound))
            }
            Err(e) => self.fail(claim, format!("error: {e}"), None),
        }
    }

    fn expect_nontrivial(&mut self, e: &Expr, rank: Rank, oracle: &OracleConfig, claim: &str) {
        self.check(!e.is_empty(), claim, || "empty".into());
        self.expect_unequal(e, &Expr::empty(), rank, oracle, claim);
    }

    /// Expansion when the denotation fits the configured limit.
    fn expand(e: &Expr, cfg: &SmallConfig) -> Option<Word> {
        e.expand(cfg.expand_limit).ok()
    }
}

fn lits(ws: &[Word]) -> Vec<Expr> {
    ws.iter().map(Expr::lit).collect()
}

fn rank(m: u32) -> Rank {
    Rank::new(m).expect("rank >= 2")
}

/// `(W^a, W^b)` with `a, b` in `-3..=3`.
fn cyclic_pair(rng: &mut ChaCha8Rng, m: Rank, max_base: usize) -> Vec<Word> {
    sampling::cyclic_tuple(rng, m, 2, max_base).2
}

// ---------------------------------------------------------------------------
// suites

fn lemma1(case: &mut Case, rng: &mut ChaCha8Rng, cfg: &SmallConfig) {
    let m = rank(2);
    if rng.gen_bool(0.5) {
        let x = sampling::noncyclic_nonempty(rng, m, 2, cfg.max_len);
        case.inputs("X", &x);
        let v = build_w2(&Expr::lit(&x[0]), &Expr::lit(&x[1]));
        let claim = "v_2(X) is neither empty nor a proper power";
        case.expect_nontrivial(&v, m, &cfg.oracle, claim);
        if let Some(w) = Case::expand(&v, cfg) {
            case.check(!w.is_proper_power(), claim, || format!("proper power of length {}", w.len()));
        }
    } else {
        let x = cyclic_pair(rng, m, cfg.max_len);
        case.inputs("X", &x);
        let v = build_w2(&Expr::lit(&x[0]), &Expr::lit(&x[1]));
        case.check(v.is_empty(), "v_2 of a cyclic pair is the identity", || format!("length {}", v.len()));
    }
}

fn lemma3(case: &mut Case, rng: &mut ChaCha8Rng, cfg: &SmallConfig) {
    let m = rank(2);
    let x = sampling::noncyclic_nonempty(rng, m, 2, cfg.max_len);
    let y = if rng.gen_bool(0.25) {
        cyclic_pair(rng, m, cfg.max_len)
    } else {
        (0..2).map(|_| sampling::word_between(rng, m, 0, cfg.max_len)).collect()
    };
    case.inputs("X", &x);
    case.inputs("Y", &y);
    let vx = build_w2(&Expr::lit(&x[0]), &Expr::lit(&x[1]));
    let vy = build_w2(&Expr::lit(&y[0]), &Expr::lit(&y[1]));
    case.expect_unequal(&vx.inv(), &vy, m, &cfg.oracle, "v_2(X)^-1 != v_2(Y)");
}

fn lemma4(case: &mut Case, rng: &mut ChaCha8Rng, cfg: &SmallConfig) {
    let m = rank(2);
    if rng.gen_bool(0.5) {
        let w = sampling::word_between(rng, m, 1, 4);
        let (a, b) = if rng.gen_bool(0.3) {
            let t = if rng.gen() { 1 } else { -1 };
            (5 * t, -6 * t)
        } else {
            (rng.gen_range(-6..=6), rng.gen_range(-6..=6))
        };
        case.input("W", &w);
        case.inputs.push(format!("a = {a}, b = {b}"));
        let e = Expr::lit(&w);
        let u = build_u(&e.pow(a), &e.pow(b));
        let k = 24 * a + 20 * b;
        case.check(u.is_empty() == (6 * a == -5 * b), "u(W^a, W^b) is empty iff 6a = -5b", || {
            format!("length {}", u.len())
        });
        match Case::expand(&u, cfg) {
            Some(x) => {
                let expected = w.power(k);
                case.check(x == expected, "u(W^a, W^b) = W^(24a + 20b)", || format!("{x}"));
                case.check(x.is_empty() || x.is_proper_power(), "u(W^a, W^b) is a proper power", || {
                    format!("{x}")
                });
            }
            None => case.check(false, "u(W^a, W^b) = W^(24a + 20b)", || "too long to expand".into()),
        }
    } else {
        let x = sampling::noncyclic_nonempty(rng, m, 2, cfg.max_len);
        case.inputs("X", &x);
        let u = build_u(&Expr::lit(&x[0]), &Expr::lit(&x[1]));
        let claim = "u(X) is neither empty nor a proper power";
        case.expect_nontrivial(&u, m, &cfg.oracle, claim);
        if let Some(w) = Case::expand(&u, cfg) {
            case.check(!w.is_proper_power(), claim, || format!("proper power of length {}", w.len()));
        }
    }
}

fn lemma7(case: &mut Case, rng: &mut ChaCha8Rng, cfg: &SmallConfig) {
    let m = rank(2);
    let x = sampling::noncyclic_nonempty(rng, m, 2, cfg.max_len);
    case.inputs("X", &x);
    let u = build_u(&Expr::lit(&x[0]), &Expr::lit(&x[1]));
    let expanded = Case::expand(&u, cfg);
    for (i, xi) in x.iter().enumerate() {
        let claim = if i == 0 { "X1 does not commute with u(X)" } else { "X2 does not commute with u(X)" };
        match &expanded {
            Some(w) => case.check(!commutes(xi, w), claim, || "commutes".into()),
            None => {
                let c = Expr::comm(&Expr::lit(xi), &u);
                case.expect_unequal(&c, &Expr::empty(), m, &cfg.oracle, claim);
            }
        }
    }
}

fn lemma9(case: &mut Case, rng: &mut ChaCha8Rng, cfg: &SmallConfig) {
    let m = rank(2);
    let pick = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(0.5) {
            cyclic_pair(rng, m, cfg.max_len)
        } else {
            sampling::noncyclic_nonempty(rng, m, 2, cfg.max_len)
        }
    };
    let (x, y) = (pick(rng), pick(rng));
    case.inputs("X", &x);
    case.inputs("Y", &y);
    let vx = build_w2(&Expr::lit(&x[0]), &Expr::lit(&x[1]));
    let vy = build_w2(&Expr::lit(&y[0]), &Expr::lit(&y[1]));
    let both_trivial = vx.is_empty() && vy.is_empty();
    let u = build_u(&vx, &vy);
    if both_trivial {
        case.check(u.is_empty(), "u(1, 1) = 1", || format!("length {}", u.len()));
        return;
    }
    // u(v_2(X), v_2(Y)) = 1 forces both inner values to be trivial
    let claim = "u(v_2(X), v_2(Y)) = 1 only if v_2(X) = v_2(Y) = 1";
    case.check(!u.is_empty(), claim, || "empty".into());
    case.expect_unequal(&u, &Expr::empty(), m, &cfg.oracle, claim);
}

fn lemma10_forms(case: &mut Case, rng: &mut ChaCha8Rng, cfg: &SmallConfig) {
    let m = rank(2);
    let x: Vec<Word> = (0..3).map(|_| sampling::word_between(rng, m, 1, cfg.max_len)).collect();
    case.inputs("X", &x);
    let [x1, x2, x3] = [0, 1, 2].map(|i| Expr::lit(&x[i]));
    let one = Expr::empty();
    let v3 = |a: &Expr, b: &Expr, c: &Expr| build_v(3, &[a.clone(), b.clone(), c.clone()]).expect("arity 3");
    let forms = [
        (v3(&one, &x2, &x3), build_w2(&x2, &x3).pow(ExponentTable::A1 as i64), "v_3(1, X2, X3) = v_2(X2, X3)^960"),
        (v3(&x1, &one, &x3), build_w2(&x3, &x1).pow(ExponentTable::A2 as i64), "v_3(X1, 1, X3) = v_2(X3, X1)^400"),
        (v3(&x1, &x2, &one), build_w2(&x1, &x2).pow(ExponentTable::A3 as i64), "v_3(X1, X2, 1) = v_2(X1, X2)^576"),
    ];
    for (lhs, rhs, claim) in &forms {
        case.expect_equal(lhs, rhs, m, &cfg.oracle, claim);
    }
}

/// Which degenerate form of `v_n`, `n >= 4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degenerate {
    B1,
    B2,
    B3,
}

/// Trivial argument positions (1-based) of a degenerate form, the two surviving
/// positions in `v_2` argument order, and the exponent.
pub fn degenerate_form(n: usize, form: Degenerate) -> (Vec<usize>, (usize, usize), u64) {
    assert!(n >= 4);
    let even = n % 2 == 0;
    let nn = n as u32;
    let to_u64 = |b: num_bigint::BigUint| u64::try_from(b).expect("exponent fits u64 for n <= 7");
    match form {
        Degenerate::B1 => {
            let pair = if even { (n, n - 1) } else { (n - 1, n) };
            ((1..=n - 2).collect(), pair, to_u64(ExponentTable::b1(nn)))
        }
        Degenerate::B2 => {
            let pair = if even { (1, n) } else { (n, 1) };
            ((2..n).collect(), pair, to_u64(ExponentTable::b2(nn)))
        }
        Degenerate::B3 => {
            let pair = if even { (n - 1, 1) } else { (1, n - 1) };
            ((2..=n - 2).chain([n]).collect(), pair, to_u64(ExponentTable::b3(nn)))
        }
    }
}

fn lemma13_forms(case: &mut Case, rng: &mut ChaCha8Rng, cfg: &SmallConfig) {
    let m = rank(2);
    for n in [4usize, 5] {
        let x: Vec<Word> = (0..n).map(|_| sampling::word_between(rng, m, 1, cfg.max_len)).collect();
        case.inputs(&format!("n={n} X"), &x);
        for form in [Degenerate::B1, Degenerate::B2, Degenerate::B3] {
            let (trivial, (i, j), k) = degenerate_form(n, form);
            let args: Vec<Expr> =
                (1..=n).map(|p| if trivial.contains(&p) { Expr::empty() } else { Expr::lit(&x[p - 1]) }).collect();
            let lhs = build_v(n, &args).expect("arity n");
            let rhs = build_w2(&args[i - 1], &args[j - 1]).pow_u64(k);
            let claim = format!("n = {n}, {form:?}: v_{n} = v_2(X{i}, X{j})^{k}");
            case.expect_equal(&lhs, &rhs, m, &cfg.oracle, &claim);
        }
    }
    // B4: X1 = X3 = X4 = W with <W, X2> non-cyclic
    let t = sampling::noncyclic_nonempty(rng, m, 2, cfg.max_len);
    case.input("B4 W", &t[0]);
    case.input("B4 X2", &t[1]);
    let (w, x2) = (Expr::lit(&t[0]), Expr::lit(&t[1]));
    let lhs = build_v(4, &[w.clone(), x2.clone(), w.clone(), w.clone()]).expect("arity 4");
    let rhs = build_v(3, &[w.clone(), x2, w]).expect("arity 3").pow_u64(ExponentTable::B4);
    case.expect_equal(&lhs, &rhs, m, &cfg.oracle, "v_4(W, X2, W, W) = v_3(W, X2, W)^1936");
}

fn theorem_cyclic_iff_trivial(case: &mut Case, rng: &mut ChaCha8Rng, cfg: &SmallConfig) {
    let m = rank(2);
    for n in 2..=5usize {
        let (_, _, cyc) = sampling::cyclic_tuple(rng, m, n, cfg.max_len.min(4));
        case.inputs(&format!("n={n} cyclic X"), &cyc);
        let v = build_v(n, &lits(&cyc)).expect("arity n");
        case.expect_equal(&v, &Expr::empty(), m, &cfg.oracle, "v_n of a cyclic tuple is the identity");
        let non = sampling::noncyclic_tuple(rng, m, n, cfg.max_len);
        case.inputs(&format!("n={n} non-cyclic X"), &non);
        let v = build_v(n, &lits(&non)).expect("arity n");
        case.expect_nontrivial(&v, m, &cfg.oracle, "v_n of a non-cyclic tuple is not the identity");
    }
}

fn ctest_conjugacy_recovery(case: &mut Case, rng: &mut ChaCha8Rng, cfg: &SmallConfig) {
    let m = rank(3);
    let n = rng.gen_range(2..=4usize);
    let x: Vec<Word> = (0..n).map(|_| sampling::word_between(rng, m, 1, cfg.max_len)).collect();
    let s = sampling::word_between(rng, m, 1, cfg.conj_len);
    let y: Vec<Word> = x.iter().map(|xi| conjugate(&s, xi)).collect();
    case.inputs("X", &x);
    case.input("S", &s);
    let se = Expr::lit(&s);
    let vx = build_v(n, &lits(&x)).expect("arity n");
    let vy = build_v(n, &lits(&y)).expect("arity n");
    let conj = Expr::product([&se, &vx, &se.inv()]);
    case.expect_equal(&conj, &vy, m, &cfg.oracle, "S v_n(X) S^-1 = v_n(S X S^-1)");
    match conjugator_tuple(&x, &y) {
        Ok(Some(t)) => {
            let ok = x.iter().zip(&y).all(|(a, b)| conjugate(&t, a) == *b);
            case.check(ok, "the recovered conjugator maps X to Y", || format!("T = {t}"));
        }
        Ok(None) => case.check(false, "a conjugator of the tuples is found", || "NotConjugate".into()),
        Err(e) => case.check(false, "a conjugator of the tuples is found", || format!("error: {e}")),
    }
}

fn substitution_equivariance(case: &mut Case, rng: &mut ChaCha8Rng, cfg: &SmallConfig) {
    let m = rank(3);
    let n = rng.gen_range(2..=4usize);
    let x: Vec<Word> = (0..n).map(|_| sampling::word_between(rng, m, 0, cfg.max_len)).collect();
    let s = sampling::word_between(rng, m, 0, 6);
    case.inputs("X", &x);
    case.input("S", &s);
    let se = Expr::lit(&s);
    let conj_args: Vec<Expr> = x.iter().map(|xi| Expr::lit(&conjugate(&s, xi))).collect();
    let lhs = build_v(n, &conj_args).expect("arity n");
    let rhs = Expr::product([&se, &build_v(n, &lits(&x)).expect("arity n"), &se.inv()]);
    case.expect_equal(&lhs, &rhs, m, &cfg.oracle, "v_n(S X S^-1) = S v_n(X) S^-1");
}

fn corollary2_demo(case: &mut Case, rng: &mut ChaCha8Rng, cfg: &SmallConfig) {
    let m = rank(2);
    let (u1, u2) = corollary_words(m);
    let psi = sampling::noncyclic_endo(rng, m, 3);
    let k: i64 = rng.gen_range(1..=2);
    case.inputs("psi(x)", psi.images());
    case.inputs.push(format!("k = {k}"));
    let psi_u1 = psi.apply(&u1).expect("rank 2");
    let psi_u2 = psi.apply(&u2).expect("rank 2");
    let claim = "<psi(u1), psi(u2)> is non-cyclic";
    case.expect_unequal(&Expr::comm(&psi_u1, &psi_u2), &Expr::empty(), m, &cfg.oracle, claim);
    let Some(root) = Case::expand(&psi_u1, cfg) else {
        case.check(false, "psi(u1) is expandable", || format!("length {}", psi_u1.len()));
        return;
    };
    let s = root.power(k);
    let phi = Endo::compose(&inner(&s, m), &psi).expect("same rank");
    case.check(phi != psi, "phi differs from psi", || "phi = psi".into());
    // phi(x_i) = S psi(x_i) S^-1 with one shared node for S
    let se = Expr::lit(&s);
    let phi_images: Vec<Expr> =
        psi.images().iter().map(|w| Expr::product([&se, &Expr::lit(w), &se.inv()])).collect();
    let images_match = phi_images.iter().zip(phi.images()).all(|(e, w)| e.expand(cfg.expand_limit).ok().as_ref() == Some(w));
    case.check(images_match, "phi(x_i) = S psi(x_i) S^-1", || phi.to_string());
    let phi_u1 = substitute(&u1, &phi_images).expect("rank 2");
    case.expect_equal(&phi_u1, &psi_u1, m, &cfg.oracle, "phi(u1) = psi(u1)");
    let phi_u2 = substitute(&u2, &phi_images).expect("rank 2");
    case.expect_unequal(&phi_u2, &psi_u2, m, &cfg.oracle, "phi(u2) != psi(u2)");
    // with the trivial conjugator the two maps coincide
    let same: Endo = Endo::compose(&inner(&Word::empty(), m), &psi).expect("same rank");
    case.check(same == psi, "tau_1 psi = psi", || format!("{same}"));
    case.check(is_cyclic_tuple(psi.images()).is_none(), "psi has non-cyclic image", || psi.to_string());
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry() {
        let suites = list_suites();
        assert_eq!(suites.len(), 11);
        assert!(suites.iter().any(|s| s.name == "lemma10_forms"));
        assert!(suites.iter().all(|s| !s.anchor.is_empty() && !s.claim.is_empty()));
        assert!(matches!(run_suite("nonexistent", 0, &SmallConfig::tiny()), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn degenerate_positions() {
        assert_eq!(degenerate_form(4, Degenerate::B1), (vec![1, 2], (4, 3), 960 * 400));
        assert_eq!(degenerate_form(4, Degenerate::B2), (vec![2, 3], (1, 4), 400 * 400));
        assert_eq!(degenerate_form(4, Degenerate::B3), (vec![2, 4], (3, 1), 576 * 400));
        assert_eq!(degenerate_form(5, Degenerate::B1), (vec![1, 2, 3], (4, 5), 960 * 400 * 400));
        assert_eq!(degenerate_form(5, Degenerate::B2), (vec![2, 3, 4], (5, 1), 400 * 400 * 400));
        assert_eq!(degenerate_form(5, Degenerate::B3), (vec![2, 3, 5], (1, 4), 576 * 400 * 400));
    }
}
