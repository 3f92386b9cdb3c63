//! Diagnostic evaluation: sampled test cases, precision/recall/F-score, and
//! the K × F benchmark grid.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{marginal_from_tables, project_tables, top_k_in_table, top_k_mpe, Method};
use crate::error::{Error, Result};
use crate::inference::target_tables;
use crate::network::{Assignment, Network, Role, VarId};
use crate::real::Real;
use crate::sampling::sample_with;
use crate::solver::{CandidateSpace, SolverOptions};

/// What makes two sampled cases duplicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DedupKey {
    /// Abnormal-observation evidence set alone.
    Evidence,
    /// Evidence together with the ground-truth target states.
    #[default]
    Case,
    /// The complete sampled assignment.
    Sample,
}

impl std::str::FromStr for DedupKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "evidence" => Ok(DedupKey::Evidence),
            "case" => Ok(DedupKey::Case),
            "sample" => Ok(DedupKey::Sample),
            other => Err(Error::InvalidArgument(format!("unknown dedup key `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CaseOptions {
    pub attempt_budget: u64,
    pub dedup: DedupKey,
}

impl Default for CaseOptions {
    fn default() -> Self {
        CaseOptions {
            attempt_budget: 1_000_000,
            dedup: DedupKey::Case,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestCase {
    pub id: usize,
    pub ground_truth: Assignment,
    /// Observations found in a non-normal state.
    pub evidence: Assignment,
    /// Targets in a faulty state in the ground truth.
    pub fault_count: usize,
}

pub fn fault_count<T: Real>(net: &Network<T>, truth: &Assignment) -> usize {
    net.targets()
        .into_iter()
        .filter(|&t| truth.get(t).is_some_and(|s| net.variable(t).is_faulty(s)))
        .count()
}

fn abnormal_observations<T: Real>(net: &Network<T>, observations: &[VarId], full: &Assignment) -> Assignment {
    observations
        .iter()
        .filter_map(|&o| full.get(o).filter(|&s| net.variable(o).is_faulty(s)).map(|s| (o, s)))
        .collect()
}

/// Forward-samples cases that show at least one abnormal observation and at
/// least `min_faults` faulty targets.
///
/// Returns fewer than `count` cases when the attempt budget runs out first,
/// and an error when it runs out without finding any.
pub fn generate_test_cases<T: Real>(
    net: &Network<T>,
    count: usize,
    min_faults: usize,
    seed: u64,
    options: &CaseOptions,
) -> Result<Vec<TestCase>> {
    if count == 0 {
        return Err(Error::InvalidArgument("case count must be at least 1".into()));
    }
    let observations = net.with_role(Role::Observation);
    if observations.is_empty() {
        return Err(Error::InvalidArgument("network has no observation variables".into()));
    }
    if let Some(&o) = observations.iter().find(|&&o| net.variable(o).normal.is_none()) {
        return Err(Error::InvalidArgument(format!(
            "observation `{}` has no normal state",
            net.variable(o).name
        )));
    }
    let targets = net.targets();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashSet<Assignment> = HashSet::new();
    let mut cases = Vec::new();
    for _ in 0..options.attempt_budget {
        let truth = sample_with(net, &mut rng);
        let evidence = abnormal_observations(net, &observations, &truth);
        if evidence.is_empty() {
            continue;
        }
        let faults = fault_count(net, &truth);
        if faults < min_faults {
            continue;
        }
        let key = match options.dedup {
            DedupKey::Evidence => evidence.clone(),
            DedupKey::Case => evidence.union(&truth.restrict(&targets))?,
            DedupKey::Sample => truth.clone(),
        };
        if !seen.insert(key) {
            continue;
        }
        cases.push(TestCase {
            id: cases.len(),
            ground_truth: truth,
            evidence,
            fault_count: faults,
        });
        if cases.len() == count {
            break;
        }
    }
    if cases.is_empty() {
        return Err(Error::CasesExhausted {
            attempts: options.attempt_budget,
        });
    }
    Ok(cases)
}

fn correct_faults<T: Real>(net: &Network<T>, explanation: &Assignment, truth: &Assignment) -> usize {
    explanation
        .iter()
        .filter(|&(v, s)| net.variable(v).is_faulty(s) && truth.get(v) == Some(s))
        .count()
}

/// Share of the explanation's faulty bindings that match the truth exactly.
/// An explanation naming no fault scores 0.
pub fn precision<T: Real>(net: &Network<T>, explanation: &Assignment, truth: &Assignment) -> f64 {
    let named = explanation.iter().filter(|&(v, s)| net.variable(v).is_faulty(s)).count();
    if named == 0 {
        return 0.0;
    }
    correct_faults(net, explanation, truth) as f64 / named as f64
}

/// Share of the truth's faulty targets that the explanation names with the exact state.
pub fn recall<T: Real>(net: &Network<T>, explanation: &Assignment, truth: &Assignment) -> f64 {
    let actual = fault_count(net, truth);
    if actual == 0 {
        return 0.0;
    }
    correct_faults(net, explanation, truth) as f64 / actual as f64
}

pub fn f_score(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * (p * r) / (p + r)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub case: usize,
    pub method: Method,
    pub k: usize,
    pub min_faults: usize,
    pub precision: f64,
    pub recall: f64,
    pub f_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub method: Method,
    pub k: usize,
    pub min_faults: usize,
    pub cases: usize,
    pub precision: f64,
    pub recall: f64,
    pub f_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub records: Vec<EvalRecord>,
    pub aggregates: Vec<Aggregate>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchmarkConfig {
    pub methods: Vec<Method>,
    pub k: usize,
    /// Grid label only; filtering by fault count is the caller's job.
    pub min_faults: usize,
    pub solver: SolverOptions,
    /// Cases evaluated in parallel; output order does not depend on it.
    pub jobs: usize,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        BenchmarkConfig {
            methods: vec![Method::Marginal, Method::PMap, Method::FMap, Method::Mre],
            k: 1,
            min_faults: 1,
            solver: SolverOptions::default(),
            jobs: 1,
        }
    }
}

/// Candidate solutions of every method for one case, top-ranked first.
pub fn case_solutions<T: Real>(
    net: &Network<T>,
    case: &TestCase,
    methods: &[Method],
    k: usize,
    solver: &SolverOptions,
) -> Result<BTreeMap<Method, Vec<Assignment>>> {
    let targets = net.targets();
    let tables = target_tables(net, &targets, &case.evidence, solver.table_budget)?;
    let mut mre: Option<Vec<Assignment>> = None;
    let mut mre_solutions = || -> Result<Vec<Assignment>> {
        if let Some(m) = &mre {
            return Ok(m.clone());
        }
        let space = CandidateSpace::from_tables(net, &tables, solver)?;
        let order = space.enumeration_order();
        let pool = space.pool_from(k, solver.rule, &order, 1)?;
        let found: Vec<Assignment> = pool.into_members().into_iter().map(|e| e.assignment).collect();
        mre = Some(found.clone());
        Ok(found)
    };
    let mut out = BTreeMap::new();
    for &method in methods {
        let solutions = match method {
            Method::Marginal => {
                if k > 1 {
                    return Err(Error::SingleSolutionMethod("marginal"));
                }
                vec![marginal_from_tables(&tables).assignment]
            }
            Method::FMap => top_k_in_table(&tables, k, Method::FMap)
                .into_iter()
                .map(|r| r.assignment)
                .collect(),
            Method::Mre => mre_solutions()?,
            Method::PMap => mre_solutions()?
                .iter()
                .map(|m| {
                    let vars: Vec<VarId> = m.vars().collect();
                    let projected = project_tables(&tables, &vars);
                    top_k_in_table(&projected, 1, Method::PMap).remove(0).assignment
                })
                .collect(),
            Method::Mpe => top_k_mpe(net, &case.evidence, k, solver.table_budget)?
                .into_iter()
                .map(|r| r.assignment.restrict(&targets))
                .collect(),
        };
        out.insert(method, solutions);
    }
    Ok(out)
}

/// Scores every method on every case. With `k > 1` each method contributes
/// its best solution by precision, recall breaking ties.
pub fn run_benchmark<T: Real>(net: &Network<T>, cases: &[TestCase], config: &BenchmarkConfig) -> Result<Vec<EvalRecord>> {
    if cases.is_empty() {
        return Err(Error::InvalidArgument("no test cases".into()));
    }
    if config.k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if config.k > 1 && config.methods.contains(&Method::Marginal) {
        return Err(Error::SingleSolutionMethod("marginal"));
    }
    let eval_case = |case: &TestCase| -> Result<Vec<EvalRecord>> {
        let solutions = case_solutions(net, case, &config.methods, config.k, &config.solver)?;
        Ok(config
            .methods
            .iter()
            .map(|&method| {
                let (p, r) = solutions[&method]
                    .iter()
                    .map(|s| (precision(net, s, &case.ground_truth), recall(net, s, &case.ground_truth)))
                    .fold((0.0f64, 0.0f64), |best, cur| {
                        if cur.0 > best.0 || (cur.0 == best.0 && cur.1 > best.1) {
                            cur
                        } else {
                            best
                        }
                    });
                EvalRecord {
                    case: case.id,
                    method,
                    k: config.k,
                    min_faults: config.min_faults,
                    precision: p,
                    recall: r,
                    f_score: f_score(p, r),
                }
            })
            .collect())
    };
    let per_case: Vec<Vec<EvalRecord>> = if config.jobs <= 1 {
        cases.iter().map(eval_case).collect::<Result<_>>()?
    } else {
        let threads = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
        threads.install(|| cases.par_iter().map(eval_case).collect::<Result<_>>())?
    };
    Ok(per_case.into_iter().flatten().collect())
}

/// Unweighted means per `(method, k, min_faults)` cell, in first-seen order.
pub fn aggregate(records: &[EvalRecord]) -> Vec<Aggregate> {
    // (count, precision, recall, f-score) sums per cell
    type Cell = (Method, usize, usize);
    let mut order: Vec<Cell> = Vec::new();
    let mut sums: BTreeMap<Cell, (usize, f64, f64, f64)> = BTreeMap::new();
    for r in records {
        let key = (r.method, r.k, r.min_faults);
        let e = sums.entry(key).or_insert_with(|| {
            order.push(key);
            (0, 0.0, 0.0, 0.0)
        });
        e.0 += 1;
        e.1 += r.precision;
        e.2 += r.recall;
        e.3 += r.f_score;
    }
    order
        .into_iter()
        .map(|key| {
            let (n, p, r, f) = sums[&key];
            let n_f = n as f64;
            Aggregate {
                method: key.0,
                k: key.1,
                min_faults: key.2,
                cases: n,
                precision: p / n_f,
                recall: r / n_f,
                f_score: f / n_f,
            }
        })
        .collect()
}

/// Runs every `(min_faults, k)` cell. Cases for a cell are those with at
/// least `min_faults` faults; single-solution methods only run at `k = 1`.
pub fn run_grid<T: Real>(
    net: &Network<T>,
    cases: &[TestCase],
    methods: &[Method],
    ks: &[usize],
    min_faults: &[usize],
    solver: &SolverOptions,
    jobs: usize,
) -> Result<BenchmarkReport> {
    let mut records = Vec::new();
    for &f in min_faults {
        let subset: Vec<TestCase> = cases.iter().filter(|c| c.fault_count >= f).cloned().collect();
        if subset.is_empty() {
            continue;
        }
        for &k in ks {
            let cell_methods: Vec<Method> = methods.iter().copied().filter(|m| k == 1 || m.supports_top_k()).collect();
            if cell_methods.is_empty() {
                continue;
            }
            let config = BenchmarkConfig {
                methods: cell_methods,
                k,
                min_faults: f,
                solver: *solver,
                jobs,
            };
            records.extend(run_benchmark(net, &subset, &config)?);
        }
    }
    let aggregates = aggregate(&records);
    Ok(BenchmarkReport { records, aggregates })
}

impl BenchmarkReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("case,method,k,min_faults,precision,recall,f_score\n");
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.case, r.method, r.k, r.min_faults, r.precision, r.recall, r.f_score
            );
        }
        out.push_str("\n# aggregate\nmethod,k,min_faults,cases,precision,recall,f_score\n");
        for a in &self.aggregates {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                a.method, a.k, a.min_faults, a.cases, a.precision, a.recall, a.f_score
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CaseLine {
    case: usize,
    ground_truth: BTreeMap<String, String>,
    evidence: BTreeMap<String, String>,
}

/// One JSON object per line: `{"case", "ground_truth", "evidence"}` keyed by names.
pub fn write_cases<T: Real>(net: &Network<T>, cases: &[TestCase]) -> String {
    let mut out = String::new();
    for c in cases {
        let line = CaseLine {
            case: c.id,
            ground_truth: net.named_bindings(&c.ground_truth),
            evidence: net.named_bindings(&c.evidence),
        };
        out.push_str(&serde_json::to_string(&line).expect("case serializes"));
        out.push('\n');
    }
    out
}

pub fn read_cases<T: Real>(net: &Network<T>, text: &str) -> Result<Vec<TestCase>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let line: CaseLine =
                serde_json::from_str(l).map_err(|e| Error::syntax(i + 1, e.column(), e.to_string()))?;
            let resolve = |m: &BTreeMap<String, String>| {
                net.assignment_from_names(m.iter().map(|(k, v)| (k.as_str(), v.as_str())))
                    .map_err(|e| Error::syntax(i + 1, 1, e.to_string()))
            };
            let ground_truth = resolve(&line.ground_truth)?;
            let evidence = resolve(&line.evidence)?;
            if ground_truth.len() != net.len() {
                return Err(Error::syntax(i + 1, 1, "ground truth must bind every variable"));
            }
            Ok(TestCase {
                id: line.case,
                fault_count: fault_count(net, &ground_truth),
                ground_truth,
                evidence,
            })
        })
        .collect()
}
