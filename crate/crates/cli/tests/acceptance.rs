//! Acceptance suite. Prints one line per criterion and exits non-zero if any
//! criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod formulas;
#[path = "../../service/tests/common/mod.rs"]
mod service;

use std::collections::BTreeSet;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use secav_core::derivation::{Derivation, Verdict};
use secav_core::hilbert::{check_w_proof, parse_prop, search_proof, AxiomSet, PropFormula};
use secav_core::natded::{check_nd_proof, to_sequent, NdProof};
use secav_core::prover::{prove, Assessment, SearchBudget};
use secav_core::script::{parse_nd_script, parse_sc_script};
use secav_core::semantics::{countermodel_search, disjunction_reading, eval_formula, eval_term, prop_valid, SearchOutcome};
use secav_core::sequent::{apply_rule, check_proof, expand_negneg, ScProof, ScRule};
use secav_core::syntax::{ext, instantiate, Formula};

struct Outcome {
    pass: bool,
    detail: String,
}

fn judge(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn files(dir: &Path, ext: &str) -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = fs::read_dir(dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == ext))
        .collect();
    out.sort();
    out
}

fn read_sc(path: &Path) -> ScProof {
    let text = fs::read_to_string(path).unwrap();
    parse_sc_script(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn read_nd(path: &Path) -> NdProof {
    let text = fs::read_to_string(path).unwrap();
    parse_nd_script(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn sample<S: Strategy>(runner: &mut TestRunner, s: &S) -> S::Value {
    s.new_tree(runner).unwrap().current()
}

fn imp_p_p() -> Outcome {
    let start = Instant::now();
    let p = Formula::atom("p");
    let np = Formula::neg(p.clone());
    let expected: ScProof = Derivation::by(
        vec![Formula::imp(p.clone(), p.clone())],
        ScRule::AlphaImp,
        vec![Derivation::by(
            vec![np.clone(), p.clone()],
            ScRule::Ext(vec![p.clone(), np.clone()]),
            vec![Derivation::by(vec![p.clone(), np.clone()], ScRule::Basic, vec![])],
        )],
    );
    let bundled = read_sc(&corpus().join("imp_p_p.secav"));
    let report = check_proof(&bundled);
    let without_ext: ScProof = Derivation::by(
        vec![Formula::imp(p.clone(), p.clone())],
        ScRule::AlphaImp,
        vec![Derivation::by(vec![np, p], ScRule::Basic, vec![])],
    );
    let rejected = check_proof(&without_ext);
    let elapsed = start.elapsed();
    let ok = bundled == expected
        && report.verdict == Verdict::Complete
        && report.steps == 3
        && matches!(rejected.verdict, Verdict::Invalid { .. })
        && elapsed < Duration::from_secs(1);
    judge(
        ok,
        format!(
            "script {} in {} steps, without Ext {}, {:.1} ms",
            report.verdict.label(),
            report.steps,
            rejected.verdict.label(),
            elapsed.as_secs_f64() * 1e3
        ),
    )
}

fn negneg_fragments() -> Outcome {
    let mut runner = TestRunner::deterministic();
    let bodies = formulas::arb_formula(3);
    let tails = proptest::collection::vec(formulas::arb_formula(2), 0..4);
    let mut rng = StdRng::seed_from_u64(2);
    let mut failures = 0;
    for _ in 0..200 {
        let p = sample(&mut runner, &bodies);
        let mut z = sample(&mut runner, &tails);
        let root: Vec<Formula> = std::iter::once(Formula::neg(Formula::neg(p.clone()))).chain(z.iter().cloned()).collect();
        let fragment = expand_negneg(&root).unwrap();
        let goals = fragment.open_goals();
        let leaf_ok = goals.len() == 1 && {
            let leaf = &fragment.node(&goals[0]).unwrap().conclusion;
            leaf[0] == p && leaf[1..] == z[..]
        };
        // Put ~p into the tail so the open leaf closes by Basic.
        z.insert(rng.gen_range(0..=z.len()), Formula::neg(p.clone()));
        let root: Vec<Formula> = std::iter::once(Formula::neg(Formula::neg(p))).chain(z).collect();
        let mut closed = expand_negneg(&root).unwrap();
        let path = closed.open_goals()[0].clone();
        let node = closed.node_mut(&path).unwrap();
        *node = Derivation::by(node.conclusion.clone(), ScRule::Basic, vec![]);
        let complete = check_proof(&closed).verdict == Verdict::Complete;
        let open_one = check_proof(&fragment).verdict == Verdict::Incomplete { open: 1 };
        if !(leaf_ok && complete && open_one) {
            failures += 1;
        }
    }
    judge(failures == 0, format!("200 random (p, z), {failures} failures"))
}

fn ext_is_subset() -> Outcome {
    let alphabet = [Formula::atom("p"), Formula::atom("q"), Formula::imp(Formula::atom("p"), Formula::atom("q"))];
    let mut lists: Vec<Vec<usize>> = vec![vec![]];
    let mut frontier = lists.clone();
    for _ in 0..4 {
        frontier = frontier
            .iter()
            .flat_map(|l| (0..alphabet.len()).map(move |i| l.iter().copied().chain([i]).collect::<Vec<_>>()))
            .collect();
        lists.extend(frontier.iter().cloned());
    }
    let to_formulas = |l: &[usize]| l.iter().map(|&i| alphabet[i].clone()).collect::<Vec<_>>();
    let (mut pairs, mut mismatches) = (0, 0);
    for y in &lists {
        let ys: BTreeSet<usize> = y.iter().copied().collect();
        let yf = to_formulas(y);
        for z in &lists {
            let subset = z.iter().all(|i| ys.contains(i));
            let zf = to_formulas(z);
            let by_rule = apply_rule(&yf, &ScRule::Ext(zf.clone())).is_ok();
            if ext(&yf, &zf) != subset || by_rule != subset {
                mismatches += 1;
            }
            pairs += 1;
        }
    }
    judge(mismatches == 0 && pairs == 121 * 121, format!("{pairs} list pairs, {mismatches} mismatches"))
}

fn substitution_lemma() -> Outcome {
    let mut runner = TestRunner::deterministic();
    let bodies = formulas::arb_formula(4);
    let terms = formulas::arb_term(3);
    let mut rng = StdRng::seed_from_u64(4);
    let mut failures = 0;
    for _ in 0..1000 {
        let p = sample(&mut runner, &bodies);
        let t = sample(&mut runner, &terms);
        let size = rng.gen_range(1..=3);
        let m = formulas::random_model(&mut rng, size);
        let e = formulas::random_env(&mut rng, size, 8);
        let lhs = eval_formula(&instantiate(&p, &t), &m, &e).unwrap();
        let d = eval_term(&t, &m, &e).unwrap();
        let rhs = eval_formula(&p, &m, &e.prepend(d)).unwrap();
        if lhs != rhs {
            failures += 1;
        }
    }
    judge(failures == 0, format!("1000 random cases, {failures} failures"))
}

fn grandfather() -> Outcome {
    let path = corpus().join("rich_grandfather.secav");
    let bundled = read_sc(&path);
    let report = check_proof(&bundled);
    let script_ok = report.verdict == Verdict::Complete && report.steps <= 25;
    let root = bundled.conclusion.clone();
    let start = Instant::now();
    let found = prove(&root, &SearchBudget::default());
    let elapsed = start.elapsed();
    let prover_ok = match &found {
        Assessment::Proved(pf) => {
            pf.conclusion == root && check_proof(pf).verdict == Verdict::Complete && elapsed < Duration::from_secs(10)
        }
        _ => false,
    };
    let prover_steps = match &found {
        Assessment::Proved(pf) => pf.steps(),
        _ => 0,
    };
    judge(
        script_ok && prover_ok,
        format!(
            "bundled script {} in {} steps (limit 25); prover {} in {:.1} ms with {} steps, re-checked",
            report.verdict.label(),
            report.steps,
            found.label(),
            elapsed.as_secs_f64() * 1e3,
            prover_steps
        ),
    )
}

/// Quantifier-free formulas over `p` and `q` by connective count, where
/// `Falsity` counts as a nullary connective. Sizes up to `STORED` are kept
/// in memory; larger ones are generated on demand.
struct Formulas {
    by_size: Vec<Vec<Arc<Formula>>>,
}

const STORED: usize = 5;

impl Formulas {
    fn new() -> Formulas {
        let mut f = Formulas { by_size: vec![vec![Arc::new(Formula::atom("p")), Arc::new(Formula::atom("q"))]] };
        for n in 1..=STORED {
            let mut layer = Vec::new();
            f.each(n, &mut |x| layer.push(Arc::new(x)));
            f.by_size.push(layer);
        }
        f
    }

    fn each(&self, n: usize, out: &mut dyn FnMut(Formula)) {
        if n < self.by_size.len() {
            self.by_size[n].iter().for_each(|x| out((**x).clone()));
            return;
        }
        if n == 1 {
            out(Formula::Falsity);
        }
        for left in 0..n {
            self.each_arc(left, &mut |a| self.each_arc(n - 1 - left, &mut |b| combine(&a, &b, out)));
        }
    }

    fn each_arc(&self, n: usize, out: &mut dyn FnMut(Arc<Formula>)) {
        if n < self.by_size.len() {
            self.by_size[n].iter().for_each(|x| out(x.clone()));
        } else {
            self.each(n, &mut |x| out(Arc::new(x)));
        }
    }
}

fn combine(a: &Arc<Formula>, b: &Arc<Formula>, out: &mut dyn FnMut(Formula)) {
    out(Formula::Imp(a.clone(), b.clone()));
    out(Formula::Dis(a.clone(), b.clone()));
    out(Formula::Con(a.clone(), b.clone()));
}

/// Formula counts from the recurrence, independent of the enumerator.
fn expected_count(max: usize) -> u64 {
    let mut c: Vec<u64> = vec![2];
    for n in 1..=max {
        let pairs: u64 = (0..n).map(|i| c[i] * c[n - 1 - i]).sum();
        c.push(3 * pairs + u64::from(n == 1));
    }
    c.iter().sum()
}

fn propositional_completeness() -> Outcome {
    const MAX: usize = 7;
    let limit = Duration::from_secs(300);
    let start = Instant::now();
    let fs = Formulas::new();
    // Work items: a size, a split and one stored formula on one side.
    let mut items: Vec<(usize, usize, usize)> = Vec::new();
    for n in 0..=MAX {
        if n <= STORED {
            items.extend((0..fs.by_size[n].len()).map(|k| (n, usize::MAX, k)));
            continue;
        }
        for left in 0..n {
            let stored = left.min(n - 1 - left);
            items.extend((0..fs.by_size[stored].len()).map(|k| (n, left, k)));
        }
    }
    let next = AtomicUsize::new(0);
    let (count, valid, mismatches, unknown) = (AtomicU64::new(0), AtomicU64::new(0), AtomicU64::new(0), AtomicU64::new(0));
    let budget = SearchBudget::default();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| {
                let (mut c, mut v, mut bad, mut unk) = (0u64, 0u64, 0u64, 0u64);
                let mut visit = |f: Formula| {
                    let truth = prop_valid(&f).expect("quantifier-free");
                    let a = prove(std::slice::from_ref(&f), &budget);
                    c += 1;
                    v += u64::from(truth);
                    bad += u64::from(truth != a.is_proved());
                    unk += u64::from(matches!(a, Assessment::Unknown));
                };
                loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some(&(n, left, k)) = items.get(i) else { break };
                    if left == usize::MAX {
                        visit((*fs.by_size[n][k]).clone());
                    } else if left <= n - 1 - left {
                        let a = &fs.by_size[left][k];
                        fs.each_arc(n - 1 - left, &mut |b| combine(a, &b, &mut visit));
                    } else {
                        let b = &fs.by_size[n - 1 - left][k];
                        fs.each_arc(left, &mut |a| combine(&a, b, &mut visit));
                    }
                }
                count.fetch_add(c, Ordering::Relaxed);
                valid.fetch_add(v, Ordering::Relaxed);
                mismatches.fetch_add(bad, Ordering::Relaxed);
                unknown.fetch_add(unk, Ordering::Relaxed);
            });
        }
    });
    let elapsed = start.elapsed();
    let (count, valid, mismatches, unknown) =
        (count.into_inner(), valid.into_inner(), mismatches.into_inner(), unknown.into_inner());
    let want = expected_count(MAX);
    judge(
        count == want && mismatches == 0 && elapsed < limit,
        format!(
            "{count} formulas (expected {want}), {valid} valid, {mismatches} mismatches, {unknown} unknown, \
             {:.1} s on {workers} threads (limit {} s)",
            elapsed.as_secs_f64(),
            limit.as_secs()
        ),
    )
}

/// Every complete proof in the corpus as (name, root sequent).
fn corpus_roots() -> Result<Vec<(String, Vec<Formula>)>, String> {
    let mut out = Vec::new();
    for dir in [corpus(), corpus().join("image")] {
        for path in files(&dir, "secav") {
            let pf = read_sc(&path);
            if check_proof(&pf).verdict != Verdict::Complete {
                return Err(format!("{} does not check", path.display()));
            }
            out.push((path.display().to_string(), pf.conclusion));
        }
    }
    for path in files(&corpus().join("nd"), "nadea") {
        let pf = read_nd(&path);
        if check_nd_proof(&pf).verdict != Verdict::Complete {
            return Err(format!("{} does not check", path.display()));
        }
        out.push((path.display().to_string(), to_sequent(&pf.conclusion)));
    }
    Ok(out)
}

fn corpus_has_no_countermodels() -> Outcome {
    let roots = match corpus_roots() {
        Ok(r) => r,
        Err(e) => return judge(false, e),
    };
    let distinct: BTreeSet<String> = roots.iter().map(|(_, s)| format!("{s:?}")).collect();
    let appendix = roots.iter().filter(|(n, _)| n.contains("appendix_")).count();
    let mut refuted = Vec::new();
    for (name, seq) in &roots {
        match countermodel_search(&disjunction_reading(seq), 3, 200_000_000) {
            SearchOutcome::Exhausted => {}
            other => refuted.push(format!("{name}: {other:?}")),
        }
    }
    judge(
        refuted.is_empty() && distinct.len() >= 24 && appendix == 3,
        format!(
            "{} proofs, {} distinct roots, {} appendix examples, {} with a countermodel up to size 3{}",
            roots.len(),
            distinct.len(),
            appendix,
            refuted.len(),
            refuted.first().map(|r| format!(" ({r})")).unwrap_or_default()
        ),
    )
}

fn implication_reading(pf: &NdProof) -> Formula {
    let j = &pf.conclusion;
    match j.assumptions.split_first() {
        None => j.goal.clone(),
        Some((a, rest)) => {
            let all = rest.iter().fold(a.clone(), |acc, b| Formula::con(acc, b.clone()));
            Formula::imp(all, j.goal.clone())
        }
    }
}

fn correspondence() -> Outcome {
    let nd = files(&corpus().join("nd"), "nadea");
    let mut problems = Vec::new();
    let mut images = 0;
    for path in &nd {
        let pf = read_nd(path);
        let image = to_sequent(&pf.conclusion);
        match prove(&image, &SearchBudget::default()) {
            Assessment::Proved(sc) if check_proof(&sc).verdict == Verdict::Complete && sc.conclusion == image => {}
            other => problems.push(format!("{}: prover {}", path.display(), other.label())),
        }
        let twin = corpus().join("image").join(path.file_stem().unwrap()).with_extension("secav");
        if twin.exists() {
            images += 1;
            let sc = read_sc(&twin);
            let reading = prop_valid(&implication_reading(&pf));
            if sc.conclusion != image || check_proof(&sc).verdict != Verdict::Complete || reading != Ok(true) {
                problems.push(format!("{}: image proof disagrees", twin.display()));
            }
        }
    }
    judge(
        problems.is_empty() && nd.len() >= 10 && images >= 8,
        format!(
            "{} ND proofs proved by the prover, {images} image proofs matched{}",
            nd.len(),
            problems.first().map(|p| format!("; {} problems, first: {p}", problems.len())).unwrap_or_default()
        ),
    )
}

fn system_w() -> Outcome {
    let from_file = fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../axioms/system-w.axioms"))
        .map_err(|e| e.to_string())
        .and_then(|t| AxiomSet::parse(&t).map_err(|e| e.to_string()));
    let from_file = match from_file {
        Ok(a) => a,
        Err(e) => return judge(false, format!("axiom file: {e}")),
    };
    let goals = [("False --> False", PropFormula::truth()), ("p --> p", parse_prop("p --> p").unwrap())];
    let mut notes = Vec::new();
    let mut ok = true;
    for (label, axioms) in [("fallback", AxiomSet::fallback()), ("system-w", from_file)] {
        for (name, goal) in &goals {
            let start = Instant::now();
            let found = search_proof(goal, &axioms, 8);
            let good = found.as_ref().is_some_and(|pf| {
                check_w_proof(pf, &axioms).verdict == Verdict::Complete && pf.conclusion() == Some(goal)
            });
            ok &= good;
            notes.push(format!(
                "{label} {name}: {}",
                match &found {
                    Some(pf) if good => format!("{} lines in {:.0} ms", pf.lines.len(), start.elapsed().as_secs_f64() * 1e3),
                    Some(_) => "proof does not re-check".to_string(),
                    None => "not found".to_string(),
                }
            ));
        }
    }
    judge(ok, notes.join("; "))
}

fn durability() -> Outcome {
    let rt = tokio::runtime::Builder::new_current_thread().enable_all().build().unwrap();
    rt.block_on(async {
        let dir = tempfile::tempdir().unwrap();
        let (succeeded, before) = {
            let app = service::App::open(dir.path(), 0);
            let ok = service::workload::random_calls(&app, &mut StdRng::seed_from_u64(10), 100).await;
            (ok, service::workload::observe(&app).await)
            // Dropped without a final snapshot, as in a crash.
        };
        let app = service::App::open(dir.path(), 0);
        let after = service::workload::observe(&app).await;
        let differing = before.iter().zip(&after).filter(|((_, a), (_, b))| a != b).count();
        let same = before.len() == after.len() && differing == 0;
        judge(
            same,
            format!("100 calls ({succeeded} succeeded), {} resources compared, {differing} differ after replay", before.len()),
        )
    })
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("imp p p derivation", imp_p_p),
        ("derived double negation rule", negneg_fragments),
        ("Ext agrees with sublist inclusion", ext_is_subset),
        ("substitution lemma", substitution_lemma),
        ("rich grandfather", grandfather),
        ("propositional completeness up to 7 connectives", propositional_completeness),
        ("corpus proofs have no small countermodels", corpus_has_no_countermodels),
        ("natural deduction and sequent correspondence", correspondence),
        ("Hilbert proofs of truth and identity", system_w),
        ("service replay after a crash", durability),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = (i + 1).to_string();
        if !filter.is_empty() && !filter.iter().any(|f| if f.parse::<usize>().is_ok() { *f == id } else { name.contains(f.as_str()) }) {
            continue;
        }
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Outcome { pass: false, detail: format!("panicked: {}", msg.unwrap_or_default()) }
        });
        failed += usize::from(!outcome.pass);
        println!("{} [{id:>2}] {name}: {}", if outcome.pass { "PASS" } else { "FAIL" }, outcome.detail);
    }
    println!("{failed} criteria failed");
    if failed > 0 {
        std::process::exit(1);
    }
}
