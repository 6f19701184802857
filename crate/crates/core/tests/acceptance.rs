//! Acceptance gate: one pass/fail line per criterion, non-zero exit on any
//! failure. Reference values come from oracles written here from the
//! definitions, not from the library's own helpers.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex;
use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use spreadlab::boolean::{alpha, image_window, simplex_value, vector_value, BooleanElement};
use spreadlab::car::{spreadability_witness, twopoint_stationarity, FermionChain, TwoPointFunction};
use spreadlab::monoid::{
    cycle_for_interval, decompose_semidirect, localize_map, psi, realize_left, semidirect_multiply, tau_pow, theta,
    Generator, IncreasingMap, Relabeling, ShiftPair,
};
use spreadlab::monotone::{self, LambdaForm, MonotoneModel};
use spreadlab::op::{
    basis_state, check_symmetry, mixture, CheckOptions, FamilyKind, Letter, MatrixModel, Operator,
    SymmetryFamily, Word,
};
use spreadlab::qdeformed::{self, q_inner, QModel};
use spreadlab::sampling;
use spreadlab::suites::{self, ModelKind, RunConfig};

type Q = Rational64;
type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: u64) -> Result<(), String> {
    ensure(elapsed < Duration::from_secs(limit_s), || format!("took {elapsed:.2?}, limit {limit_s} s"))
}

// ---------------------------------------------------------------- oracles

/// Pointwise θ/ψ/τ applied as plain closures.
#[derive(Clone, Copy, Debug)]
enum Step {
    Up(i64),
    Down(i64),
    Shift(i64),
}

fn step(s: Step, k: i64) -> i64 {
    match s {
        Step::Up(h) => {
            if k >= h {
                k + 1
            } else {
                k
            }
        }
        Step::Down(h) => {
            if k <= h {
                k - 1
            } else {
                k
            }
        }
        Step::Shift(n) => k + n,
    }
}

/// `steps[0] ∘ steps[1] ∘ …` evaluated pointwise.
fn run_steps(steps: &[Step], k: i64) -> i64 {
    steps.iter().rev().fold(k, |x, &s| step(s, x))
}

fn steps_to_map(steps: &[Step]) -> IncreasingMap {
    steps.iter().fold(IncreasingMap::identity(), |acc, &s| {
        let g = match s {
            Step::Up(h) => theta(h),
            Step::Down(h) => psi(h),
            Step::Shift(n) => tau_pow(n),
        };
        acc.compose(&g)
    })
}

fn random_steps(rng: &mut impl Rng) -> Vec<Step> {
    let n = rng.gen_range(0..=8);
    (0..n)
        .map(|_| match rng.gen_range(0..3) {
            0 => Step::Up(rng.gen_range(-20..=20)),
            1 => Step::Down(rng.gen_range(-20..=20)),
            _ => Step::Shift(rng.gen_range(-5..=5)),
        })
        .collect()
}

/// Increasing bijection of ℤ onto ℤ \ holes that is `k ↦ k + offset` far to
/// the left, found by walking up from below every hole.
fn oracle_canonical(offset: i64, holes: &[i64], k: i64) -> i64 {
    let floor = holes.iter().copied().chain([k + offset]).min().unwrap() - 1 - offset;
    let mut value = floor + offset;
    for _ in floor..k {
        value += 1;
        while holes.contains(&value) {
            value += 1;
        }
    }
    value
}

fn apply_generator(g: Generator, k: i64) -> i64 {
    match g {
        Generator::Theta(h) => step(Step::Up(h), k),
        Generator::Psi(h) => step(Step::Down(h), k),
    }
}

fn qc(n: i64, d: i64) -> Complex<Q> {
    Complex::new(Q::new(n, d), Q::zero())
}

/// Dense matrix of an operator indexed by model labels.
fn dense<L: Ord + Clone>(op: &Operator<Q>, labels: &[L]) -> BTreeMap<(L, L), Complex<Q>> {
    op.entries().map(|(i, j, v)| ((labels[i].clone(), labels[j].clone()), *v)).filter(|(_, v)| !v.is_zero()).collect()
}

/// `Σ_{π : v_π(i) = u_i} q^{inv π}` by listing every permutation.
fn brute_q_inner(u: &[i64], v: &[i64], q: Q) -> Q {
    if u.len() != v.len() {
        return Q::zero();
    }
    let n = u.len();
    let mut total = Q::zero();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        if (0..n).all(|i| v[perm[i]] == u[i]) {
            let inv = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
            total += (0..inv).fold(Q::one(), |acc, _| acc * q);
        }
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else { break };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
    total
}

// ---------------------------------------------------------------- criteria

fn monoid_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = sampling::rng(1);
    for _ in 0..1000 {
        let (a, b) = (random_steps(&mut rng), random_steps(&mut rng));
        let (f, g) = (steps_to_map(&a), steps_to_map(&b));
        let fg = f.compose(&g);
        for k in -50..=50 {
            let want = run_steps(&a, run_steps(&b, k));
            ensure(fg.evaluate(k) == want, || format!("({f})∘({g}) at {k}: {} vs {want}", fg.evaluate(k)))?;
            ensure(fg.evaluate(k) == oracle_canonical(fg.offset(), fg.gaps(), k), || format!("canonical {fg} at {k}"))?;
        }
    }
    within(start.elapsed(), 5)?;
    Ok(format!("1000 pairs on [-50, 50] in {:.2?}", start.elapsed()))
}

fn semidirect() -> Outcome {
    let mut rng = sampling::rng(2);
    for _ in 0..500 {
        let (a, b) = (random_steps(&mut rng), random_steps(&mut rng));
        let (f, g) = (steps_to_map(&a), steps_to_map(&b));
        let p = semidirect_multiply(&decompose_semidirect(&f), &decompose_semidirect(&g)).map_err(|e| e.to_string())?;
        let r = realize_left(&p);
        ensure(r == f.compose(&g), || format!("pair product of {f} and {g} realizes to {r}"))?;
        for k in -50..=50 {
            ensure(r.evaluate(k) == run_steps(&a, run_steps(&b, k)), || format!("{r} at {k}"))?;
        }
    }
    let p = decompose_semidirect(&psi(0));
    ensure(p == ShiftPair { shift: -1, body: theta(1) }, || format!("ψ_0 splits as {p:?}"))?;
    Ok("500 pairs; ψ_0 = (-1, θ_1)".into())
}

fn localization() -> Outcome {
    let mut rng = sampling::rng(3);
    for _ in 0..200 {
        let steps = random_steps(&mut rng);
        let f = steps_to_map(&steps);
        let k = rng.gen_range(-15..=15);
        let l = k + rng.gen_range(0..=10);
        let word = localize_map(&f, k, l).map_err(|e| e.to_string())?;
        for j in k..=l {
            let got = word.generators().iter().rev().fold(j, |x, &g| apply_generator(g, x));
            ensure(got == run_steps(&steps, j), || format!("word {word} for {f} at {j}"))?;
        }
        let c = cycle_for_interval(k, l).map_err(|e| e.to_string())?;
        for j in k..=l {
            ensure(c.apply(j) == j + 1, || format!("cycle on [{k}, {l}] at {j}"))?;
        }
        ensure(c.apply(l + 1) == k, || format!("cycle on [{k}, {l}] does not close"))?;
    }
    Ok("200 intervals".into())
}

fn monotone_relations() -> Outcome {
    let start = Instant::now();
    let (lo, hi, depth) = (0i64, 7i64, 4usize);
    let model = MonotoneModel::<Q>::new((lo, hi), depth).map_err(|e| e.to_string())?;
    let m = MatrixModel::new(&model).map_err(|e| e.to_string())?;
    let labels = m.space().labels().to_vec();
    ensure(labels.len() == 163, || format!("basis has {} vectors", labels.len()))?;

    // a†_i from the definition: prepend i when it is below the first entry.
    for i in lo..=hi {
        let mut want = BTreeMap::new();
        for t in &labels {
            if t.len() < depth && t.first().is_none_or(|&f| i < f) {
                let mut image = vec![i];
                image.extend(t);
                want.insert((image, t.clone()), qc(1, 1));
            }
        }
        ensure(dense(&m.creator(i).unwrap(), &labels) == want, || format!("a†_{i} differs from the definition"))?;
        ensure(m.annihilator(i).unwrap() == m.creator(i).unwrap().adjoint(), || format!("a_{i} is not the adjoint"))?;
    }
    for i in lo..=hi {
        for j in lo..=hi {
            let (ci, cj, ai, aj) = (m.creator(i).unwrap(), m.creator(j).unwrap(), m.annihilator(i).unwrap(), m.annihilator(j).unwrap());
            if i >= j {
                ensure(ci.try_mul(&cj).unwrap().is_zero(), || format!("a†_{i} a†_{j} ≠ 0"))?;
                ensure(aj.try_mul(&ai).unwrap().is_zero(), || format!("a_{j} a_{i} ≠ 0"))?;
            }
            if i != j {
                ensure(ai.try_mul(&cj).unwrap().is_zero(), || format!("a_{i} a†_{j} ≠ 0"))?;
            }
        }
    }
    // a_i a†_i = I − Σ_{k ≤ i} a†_k a_k below the top level
    for i in lo..=hi {
        let lhs = m.annihilator(i).unwrap().try_mul(&m.creator(i).unwrap()).unwrap();
        let mut rhs = m.identity();
        for k in lo..=i {
            rhs = rhs.try_sub(&m.creator(k).unwrap().try_mul(&m.annihilator(k).unwrap()).unwrap()).unwrap();
        }
        for (c, t) in labels.iter().enumerate().filter(|(_, t)| t.len() < depth) {
            ensure(lhs.column(c) == rhs.column(c), || format!("commutation at i = {i} on e_{t:?}"))?;
        }
    }
    within(start.elapsed(), 30)?;
    Ok(format!("window of 8, depth 4, exact, {:.2?}", start.elapsed()))
}

fn hamel() -> Outcome {
    let window = (0, 4);
    let model = MonotoneModel::<f64>::new(window, 5).map_err(|e| e.to_string())?;
    let m = MatrixModel::new(&model).map_err(|e| e.to_string())?;
    let mut words: Vec<Word> = LambdaForm::enumerate(window, 2, 2, 4)
        .into_iter()
        .filter(|l| !l.is_diagonal_pair())
        .map(|l| l.word())
        .collect();
    words.extend((window.0..=window.1).map(|i| Word(vec![Letter::Annihilator(i), Letter::Creator(i)])));
    ensure(words.iter().any(|w| w.is_empty()), || "identity missing".into())?;
    let n = m.dim();
    let mut columns = Vec::new();
    for w in &words {
        let op = m.word(w).map_err(|e| e.to_string())?;
        let mut col = vec![0.0; n * n];
        for (i, j, v) in op.entries() {
            ensure(v.im == 0.0, || "complex entry".into())?;
            col[j * n + i] = v.re;
        }
        columns.push(col);
    }
    let a = DMatrix::from_fn(n * n, columns.len(), |r, c| columns[c][r]);
    let sv = a.singular_values();
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    ensure(sv.len() == words.len() && min > 1e-8, || format!("smallest singular value {min:e}"))?;
    Ok(format!("{} operators, smallest singular value {min:.4}", words.len()))
}

fn monotone_simplex() -> Outcome {
    let model_window = (-23, 23);
    let model = Arc::new(MonotoneModel::<f64>::new(model_window, 6).map_err(|e| e.to_string())?);
    let words: Vec<Word> = LambdaForm::enumerate((-3, 3), 4, 4, 4).iter().map(|l| l.word()).collect();
    let omega = monotone::vacuum_state(model.clone());
    let at_infinity = monotone::state_at_infinity(model.clone());
    let mut rng = sampling::rng(6);
    let family = SymmetryFamily::new(FamilyKind::Spreading, suites::spreading_maps(&mut rng, 20), 6);
    let opts = CheckOptions { tol: 1e-12, window: Some((model_window.0 + 1, model_window.1)), ..Default::default() };
    let mut worst = 0.0f64;
    let mut samples = 0;
    for x in [0.0, 0.25, 0.5, 1.0] {
        let phi = mixture(&at_infinity, &omega, x).map_err(|e| e.to_string())?;
        // On λ-forms both states vanish except at the identity.
        for w in &words {
            let want = if w.is_empty() { 1.0 } else { 0.0 };
            let got = phi.evaluate(w).map_err(|e| e.to_string())?;
            ensure((got - Complex::new(want, 0.0)).norm() <= 1e-12, || format!("x = {x} on {w}: {got}"))?;
        }
        let r = check_symmetry(&phi, &words, &family, &opts);
        ensure(r.passed, || format!("x = {x}: deviation {:e}", r.max_deviation))?;
        worst = worst.max(r.max_deviation);
        samples += r.samples;
    }
    let diag = Word(vec![Letter::Annihilator(0), Letter::Creator(0)]);
    let v = at_infinity.evaluate(&diag).map_err(|e| e.to_string())?;
    ensure(v.norm() == 0.0, || format!("ω_∞(a_0 a†_0) = {v}"))?;
    let vector = basis_state(model, vec![0], "e_(0)");
    let r = check_symmetry(&vector, &words, &family, &opts);
    ensure(!r.passed && !r.witnesses.is_empty(), || "vector state e_(0) shows no witness".into())?;
    let w = &r.witnesses[0];
    Ok(format!(
        "{samples} samples, max deviation {worst:e}; e_(0) fails on {} under {} ({:?} vs {:?})",
        w.word, w.map, w.original, w.relabeled
    ))
}

fn qdeformed() -> Outcome {
    let qs = [Q::new(-9, 10), Q::new(-1, 2), Q::zero(), Q::new(1, 2), Q::new(9, 10)];
    let mut tuples: Vec<Vec<i64>> = vec![vec![]];
    let mut level: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..4 {
        level = level.iter().flat_map(|t| (1..=3).map(move |j| [t.clone(), vec![j]].concat())).collect();
        tuples.extend(level.iter().cloned());
    }
    let mut pairs = 0;
    for q in qs {
        for u in &tuples {
            for v in tuples.iter().filter(|v| v.len() == u.len()) {
                pairs += 1;
                let (a, b) = (q_inner(u, v, &q), brute_q_inner(u, v, q));
                ensure(a == b, || format!("q = {q}: ⟨{u:?}, {v:?}⟩ = {a}, permutation sum {b}"))?;
            }
        }
    }

    let mut adj = 0.0f64;
    let mut comm = 0.0f64;
    let mut gram_min = f64::INFINITY;
    for q in qs {
        let qf = q.to_f64().unwrap();
        let model = QModel::<f64>::new((1, 3), 3, qf).map_err(|e| e.to_string())?;
        let m = MatrixModel::new(&model).map_err(|e| e.to_string())?;
        gram_min = gram_min.min(m.space().min_gram_eigenvalue());
        for j in 1..=3 {
            let d = m.metric_adjoint(&m.creator(j).unwrap()).unwrap().max_abs_diff(&m.annihilator(j).unwrap());
            adj = adj.max(d);
        }
        // l_i l†_j − q l†_j l_i = δ_ij on vectors below the top level
        let labels = m.space().labels().to_vec();
        for i in 1..=3 {
            for j in 1..=3 {
                let lhs = m
                    .annihilator(i)
                    .unwrap()
                    .try_mul(&m.creator(j).unwrap())
                    .unwrap()
                    .try_sub(&m.creator(j).unwrap().try_mul(&m.annihilator(i).unwrap()).unwrap().scale(&Complex::new(qf, 0.0)))
                    .unwrap();
                let rhs = if i == j { m.identity() } else { Operator::zeros(m.dim(), m.dim()) };
                for (c, _) in labels.iter().enumerate().filter(|(_, t)| t.len() < 3) {
                    for (a, b) in lhs.column(c).iter().zip(rhs.column(c)) {
                        comm = comm.max((a - b).norm());
                    }
                }
            }
        }
    }
    ensure(adj <= 1e-10, || format!("adjointness defect {adj:e}"))?;
    ensure(comm <= 1e-10, || format!("q-commutation defect {comm:e}"))?;
    ensure(gram_min > 0.0, || format!("Gram eigenvalue {gram_min:e}"))?;

    let words_window = (-2, 2);
    let model_window = (-22, 22);
    let words = suites::q_words(words_window, 4);
    let mut rng = sampling::rng(7);
    let families = [
        SymmetryFamily::new(FamilyKind::Shift, suites::shift_maps(), 7),
        SymmetryFamily::new(FamilyKind::Permutations, suites::permutation_maps(&mut rng, words_window, 10), 7),
        SymmetryFamily::new(FamilyKind::Spreading, suites::spreading_maps(&mut rng, 10), 7),
    ];
    let opts = CheckOptions { tol: 1e-12, window: Some(model_window), ..Default::default() };
    let mut vac = 0.0f64;
    for q in qs {
        let model = Arc::new(QModel::new(model_window, 4, q.to_f64().unwrap()).map_err(|e| e.to_string())?);
        let omega = qdeformed::vacuum_state(model.clone());
        for family in &families {
            let r = check_symmetry(&omega, &words, family, &opts);
            ensure(r.passed, || format!("vacuum fails {} at q = {q}: {:e}", family.kind, r.max_deviation))?;
            vac = vac.max(r.max_deviation);
        }
        let vector = basis_state(model, vec![0], "e_0");
        let r = check_symmetry(&vector, &words, &families[0], &opts);
        ensure(!r.passed && !r.witnesses.is_empty(), || format!("e_0 shows no witness at q = {q}"))?;
    }
    Ok(format!(
        "{pairs} inner products exact; adjoint {adj:.1e}; commutation {comm:.1e}; Gram min {gram_min:.3}; vacuum {vac:.1e}"
    ))
}

type BoolQ = BooleanElement<Q>;

fn random_element(rng: &mut impl Rng, w: (i64, i64)) -> BoolQ {
    let n = (w.1 - w.0 + 2) as usize;
    let mut k = Operator::zeros(n, n);
    for _ in 0..4 {
        let v = Complex::new(Q::new(rng.gen_range(-3..=3), rng.gen_range(1..=3)), Q::new(rng.gen_range(-3..=3), 2));
        k.set(rng.gen_range(0..n), rng.gen_range(0..n), v);
    }
    BoolQ::new(w, k, qc(rng.gen_range(-2..=2), 1)).unwrap()
}

fn to_f(z: &Complex<Q>) -> Complex<f64> {
    Complex::new(z.re.to_f64().unwrap(), z.im.to_f64().unwrap())
}

/// Compares `K + γI` on the window only; `(K, γ)` itself is not unique there.
fn window_diff(a: &BoolQ, b: &BoolQ) -> f64 {
    a.to_window_matrix().max_abs_diff(&b.to_window_matrix())
}

fn diff(a: &BoolQ, b: &BoolQ) -> f64 {
    let (ma, mb) = (a.to_window_matrix(), b.to_window_matrix());
    let d = ma.max_abs_diff(&mb);
    d.max((to_f(a.scalar()) - to_f(b.scalar())).norm())
}

fn boolean() -> Outcome {
    let w = (-4, 4);
    let e = |r: std::result::Result<BoolQ, spreadlab::Error>| r.map_err(|e| e.to_string());
    let mut number = BoolQ::zero(w);
    for k in w.0..=w.1 {
        number = e(number.try_add(&e(e(BoolQ::creator(w, k))?.try_mul(&e(BoolQ::annihilator(w, k))?))?))?;
    }
    let complement = e(BoolQ::identity(w).try_add(&number.scale(&qc(-1, 1))))?;
    for i in w.0..=w.1 {
        for j in w.0..=w.1 {
            let lhs = e(e(BoolQ::annihilator(w, i))?.try_mul(&e(BoolQ::creator(w, j))?))?;
            let rhs = if i == j { complement.clone() } else { BoolQ::zero(w) };
            ensure(window_diff(&lhs, &rhs) == 0.0, || format!("b_{i} b†_{j}"))?;
        }
    }
    // on the window, I − Σ b†_k b_k is the vacuum projection ε_##
    ensure(window_diff(&complement, &e(BoolQ::matrix_unit(w, None, None))?) == 0.0, || "vacuum projection".into())?;

    let mut rng = sampling::rng(8);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let (f, g) = (sampling::standard_map(&mut rng), sampling::standard_map(&mut rng));
        let (x, y) = (random_element(&mut rng, w), random_element(&mut rng, w));
        let (rf, rg) = (Relabeling::from(f.clone()), Relabeling::from(g.clone()));
        let wg = image_window(&g, w);
        let wfg = image_window(&f, wg);
        let wf = image_window(&f, w);
        let chained = e(alpha(&rf, &e(alpha(&rg, &x, wg))?, wfg))?;
        let direct = e(alpha(&Relabeling::from(f.compose(&g)), &x, wfg))?;
        worst = worst.max(diff(&chained, &direct));
        let prod = e(alpha(&rf, &e(x.try_mul(&y))?, wf))?;
        let prod2 = e(e(alpha(&rf, &x, wf))?.try_mul(&e(alpha(&rf, &y, wf))?))?;
        worst = worst.max(diff(&prod, &prod2));
        worst = worst.max(diff(&e(alpha(&rf, &x.adjoint(), wf))?, &e(alpha(&rf, &x, wf))?.adjoint()));
        worst = worst.max(diff(&e(alpha(&rf, &BoolQ::identity(w), wf))?, &BoolQ::identity(wf)));
        // matrix units move with their labels
        let (k, l) = (rng.gen_range(w.0..=w.1), rng.gen_range(w.0..=w.1));
        let moved = e(alpha(&rf, &e(BoolQ::matrix_unit(w, Some(k), Some(l)))?, wf))?;
        let want = e(BoolQ::matrix_unit(wf, Some(f.evaluate(k)), Some(f.evaluate(l))))?;
        worst = worst.max(diff(&moved, &want));
    }
    ensure(worst <= 1e-12, || format!("morphism defect {worst:e}"))?;

    let mut maps: Vec<Relabeling> = vec![tau_pow(1).into(), tau_pow(-1).into(), theta(0).into(), psi(0).into()];
    maps.extend((0..30).map(|_| Relabeling::from(sampling::standard_map(&mut rng))));
    maps.extend((0..30).map(|_| Relabeling::from(sampling::permutation(&mut rng, w, 5))));
    let mut elements = vec![BoolQ::identity(w)];
    elements.extend((0..30).map(|_| random_element(&mut rng, w)));
    for lambda in [0.0, 0.3, 1.0] {
        for g in &maps {
            let out = image_window(g, w);
            let out = (out.0.min(w.0), out.1.max(w.1));
            for x in &elements {
                let moved = e(alpha(g, x, out))?;
                // λ(K[#,#] + γ) + (1 − λ)γ
                let want = to_f(&x.compact().get(0, 0)) * lambda + to_f(x.scalar());
                let (a, b) = (to_f(&simplex_value(x, lambda)), to_f(&simplex_value(&moved, lambda)));
                ensure((a - want).norm() <= 1e-12 && (a - b).norm() <= 1e-12, || format!("λ = {lambda} under {g}"))?;
            }
        }
    }

    let e00 = e(BoolQ::matrix_unit((0, 0), Some(0), Some(0)))?;
    let moved = e(alpha(&theta(0).into(), &e00, (0, 1)))?;
    ensure(moved == e(BoolQ::matrix_unit((0, 1), Some(1), Some(1)))?, || "θ_0 does not send ε_00 to ε_11".into())?;
    let before = vector_value(&e00, Some(0)).map_err(|e| e.to_string())?;
    let after = vector_value(&moved, Some(0)).map_err(|e| e.to_string())?;
    ensure(before == qc(1, 1) && after == qc(0, 1), || format!("⟨ε e_0, e_0⟩: {before} then {after}"))?;
    Ok(format!("relations exact; 200 morphism triples, defect {worst:e}; simplex invariant; ε_00 ↦ ε_11 breaks e_0"))
}

/// Kronecker Jordan–Wigner: `A_k = Z ⊗ … ⊗ Z ⊗ a ⊗ I ⊗ … ⊗ I` with site 0 leftmost.
fn kron_annihilator(sites: usize, k: usize) -> DMatrix<i64> {
    let z = DMatrix::from_row_slice(2, 2, &[1, 0, 0, -1]);
    let a = DMatrix::from_row_slice(2, 2, &[0, 1, 0, 0]);
    let id = DMatrix::<i64>::identity(2, 2);
    (0..sites).fold(DMatrix::<i64>::identity(1, 1), |acc, s| {
        let factor = if s < k {
            &z
        } else if s == k {
            &a
        } else {
            &id
        };
        acc.kronecker(factor)
    })
}

fn car() -> Outcome {
    let sites = 8usize;
    let chain = FermionChain::<Q>::new((0, sites as i64 - 1)).map_err(|e| e.to_string())?;
    let m = MatrixModel::new(&chain).map_err(|e| e.to_string())?;
    let n = m.dim();
    // occupation bit k ↔ Kronecker digit (sites − 1 − k)
    let kron_index = |label: u64| (0..sites).fold(0usize, |acc, s| (acc << 1) | ((label >> s) & 1) as usize);
    let id = m.identity();
    let zero = Operator::zeros(n, n);
    for k in 0..sites {
        let want = kron_annihilator(sites, k);
        let got = m.annihilator(k as i64).unwrap();
        for (c, &lc) in m.space().labels().iter().enumerate() {
            for (r, &lr) in m.space().labels().iter().enumerate() {
                let v = got.get(r, c);
                ensure(v == qc(want[(kron_index(lr), kron_index(lc))], 1), || format!("A_{k} entry"))?;
            }
        }
    }
    for j in 0..sites as i64 {
        for k in 0..sites as i64 {
            let (aj, ak, ck) = (m.annihilator(j).unwrap(), m.annihilator(k).unwrap(), m.creator(k).unwrap());
            let delta = if j == k { &id } else { &zero };
            ensure(aj.anticommutator(&ck) == *delta, || format!("{{A_{j}, A†_{k}}}"))?;
            ensure(aj.anticommutator(&ak).is_zero(), || format!("{{A_{j}, A_{k}}}"))?;
            let (xj, xk) = (m.position(j).unwrap(), m.position(k).unwrap());
            let want = if j == k { id.scale(&qc(2, 1)) } else { zero.clone() };
            ensure(xj.anticommutator(&xk) == want, || format!("{{x_{j}, x_{k}}}"))?;
        }
        let x = m.position(j).unwrap();
        ensure(x.adjoint() == x, || format!("x_{j} not self-adjoint"))?;
    }

    let t = TwoPointFunction::new(0.05, 0.5).map_err(|e| e.to_string())?;
    let st = twopoint_stationarity(&t, (-20, 20), 1e-15);
    ensure(st.passed, || format!("stationarity deviation {:e}", st.max_deviation))?;
    let w = spreadability_witness(&t, 1e-12).ok_or("no spreadability witness")?;
    ensure(w.map == theta(0) && (w.m, w.n) == (1, -1), || format!("witness {} at ({}, {})", w.map, w.m, w.n))?;
    let oracle = |m: i64, n: i64| 3.0 * t.c / (std::f64::consts::PI.powi(2) * ((m - n) as f64).powi(2));
    let f = theta(0);
    let ratio = oracle(1, -1) / oracle(f.evaluate(1), f.evaluate(-1));
    ensure((ratio - 2.25).abs() < 1e-12 && (w.ratio - 2.25).abs() < 1e-12, || format!("ratio {} / {ratio}", w.ratio))?;
    Ok(format!("8 sites exact; stationary on [-20, 20]; θ_0 witness ratio {:.6}", w.ratio))
}

fn determinism() -> Outcome {
    let start = Instant::now();
    let mut summary = Vec::new();
    for kind in ModelKind::ALL {
        let config = RunConfig { seed: 42, ..RunConfig::new(kind) };
        let a = suites::run(&config).map_err(|e| e.to_string())?;
        let b = suites::run(&config).map_err(|e| e.to_string())?;
        ensure(a.passed, || format!("{kind} report fails"))?;
        ensure(a.to_json_without_timing() == b.to_json_without_timing(), || format!("{kind} reports differ"))?;
        summary.push(format!("{kind} {}", a.suites.len()));
    }
    within(start.elapsed(), 300)?;
    Ok(format!("two identical runs of every model ({}) in {:.2?}", summary.join(", "), start.elapsed()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("monoid composition matches pointwise evaluation", monoid_oracle),
        ("shift-pair product realizes composition", semidirect),
        ("localization words and interval cycles", localization),
        ("monotone creation/annihilation relations", monotone_relations),
        ("monotone λ-forms are linearly independent", hamel),
        ("monotone simplex states are spreadable", monotone_simplex),
        ("q-deformed inner product, adjoints and vacuum", qdeformed),
        ("boolean relations, endomorphisms and simplex", boolean),
        ("CAR relations and two-point witness", car),
        ("full run is deterministic and fast", determinism),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", n + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
