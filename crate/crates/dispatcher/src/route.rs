//! Routing: predict a query's difficulty from its structure and send it
//! down exactly one of the two solve paths.
//!
//! The dispatcher itself spends zero LLM tokens — feature extraction is
//! local — so a routed query's token cost is exactly the chosen path's
//! cost.

use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{mpsc, Arc};

use agent_runtime::{run_agent, ChatModel, DEFAULT_MAX_STEPS};
use bench_gen::TaskInstance;
use eval_harness::{
    llm_complete, parse_answer, render_prompt, score_instance, EndpointConfig, Strategy,
    Templates,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::features::extract_features;
use crate::gbdt::DifficultyModel;
use crate::DispatchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Direct,
    Agent,
}

/// The model's verdict on one query: route = agent iff p_hard ≥ θ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RouteDecision {
    pub p_hard: f64,
    pub route: Route,
}

/// Classify an instance's difficulty and pick a route.
pub fn predict_difficulty(
    model: &DifficultyModel,
    instance: &TaskInstance,
) -> Result<RouteDecision, DispatchError> {
    let features = extract_features(&instance.dynamic_graph()).to_array();
    let p_hard = model.predict_p_hard(&features)?;
    Ok(RouteDecision {
        p_hard,
        route: if p_hard >= model.theta { Route::Agent } else { Route::Direct },
    })
}

/// The random-routing baseline: send a query to the agent with
/// probability `p_agent`, deterministically per (seed, instance id).
pub fn random_route(p_agent: f64, seed: u64, instance_id: &str) -> Route {
    // Stable hash of the id (FNV-1a) mixed into the seed.
    let mut h: u64 = 0xcbf29ce484222325;
    for b in instance_id.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ h);
    if rng.gen_range(0.0..1.0) < p_agent {
        Route::Agent
    } else {
        Route::Direct
    }
}

/// One path's verdict on one instance.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub score: f64,
    pub tokens: Option<u64>,
    pub answer: Option<String>,
}

/// A solve path. Implementations must be shareable across routing
/// workers.
pub trait Solver: Sync {
    fn solve(&self, instance: &TaskInstance) -> Result<SolveOutcome, DispatchError>;
}

/// The direct path: one prompt, one completion.
pub struct DirectSolver {
    pub endpoint: EndpointConfig,
    pub strategy: Strategy,
    pub templates: Templates,
}

impl Solver for DirectSolver {
    fn solve(&self, instance: &TaskInstance) -> Result<SolveOutcome, DispatchError> {
        let prompt = render_prompt(instance, self.strategy, &self.templates)?;
        let completion = llm_complete(&prompt, &self.endpoint).map_err(|e| {
            DispatchError::Path(format!("direct path failed on {}: {e}", instance.id))
        })?;
        let parsed = parse_answer(&completion.text, instance.task);
        let score = score_instance(instance, &parsed)?;
        let tokens = match (completion.prompt_tokens, completion.completion_tokens) {
            (None, None) => None,
            (p, c) => Some(p.unwrap_or(0) + c.unwrap_or(0)),
        };
        Ok(SolveOutcome { score: score.value, tokens, answer: Some(completion.text) })
    }
}

/// The agent path: a full tool-calling episode.
pub struct AgentSolver<M: ChatModel> {
    pub model: M,
    pub templates: Templates,
    pub max_steps: usize,
}

impl<M: ChatModel> AgentSolver<M> {
    pub fn new(model: M, templates: Templates) -> AgentSolver<M> {
        AgentSolver { model, templates, max_steps: DEFAULT_MAX_STEPS }
    }
}

impl<M: ChatModel> Solver for AgentSolver<M> {
    fn solve(&self, instance: &TaskInstance) -> Result<SolveOutcome, DispatchError> {
        let outcome = run_agent(instance, &self.model, &self.templates, self.max_steps)
            .map_err(|e| {
                DispatchError::Path(format!("agent path failed on {}: {e}", instance.id))
            })?;
        let tokens = match (outcome.prompt_tokens, outcome.completion_tokens) {
            (None, None) => None,
            (p, c) => Some(p.unwrap_or(0) + c.unwrap_or(0)),
        };
        match outcome.final_answer {
            Some(answer) => {
                let parsed = parse_answer(&format!("Answer: {answer}"), instance.task);
                let score = score_instance(instance, &parsed)?;
                Ok(SolveOutcome { score: score.value, tokens, answer: Some(answer) })
            }
            None => Ok(SolveOutcome { score: 0.0, tokens, answer: None }),
        }
    }
}

/// One routed query in the output stream.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RouteRecord {
    pub id: String,
    pub task: String,
    pub motif: Option<String>,
    pub route: Route,
    pub p_hard: Option<f64>,
    pub score: f64,
    pub tokens: Option<u64>,
}

/// How queries get assigned to paths.
pub enum RoutePolicy<'a> {
    /// The trained difficulty model with its threshold θ.
    Model(&'a DifficultyModel),
    /// Random baseline: agent with probability `p_agent`.
    Random { p_agent: f64, seed: u64 },
    /// Everything down one path (the pure-policy baselines).
    Fixed(Route),
}

impl RoutePolicy<'_> {
    fn decide(&self, instance: &TaskInstance) -> Result<(Route, Option<f64>), DispatchError> {
        Ok(match self {
            RoutePolicy::Model(model) => {
                let d = predict_difficulty(model, instance)?;
                (d.route, Some(d.p_hard))
            }
            RoutePolicy::Random { p_agent, seed } => {
                (random_route(*p_agent, *seed, &instance.id), None)
            }
            RoutePolicy::Fixed(route) => (*route, None),
        })
    }
}

/// Route one instance and execute exactly the chosen path. A path failure
/// is an error — there is no silent fallback.
pub fn route_and_solve(
    instance: &TaskInstance,
    policy: &RoutePolicy,
    direct: &dyn Solver,
    agent: &dyn Solver,
) -> Result<RouteRecord, DispatchError> {
    let (route, p_hard) = policy.decide(instance)?;
    let outcome = match route {
        Route::Direct => direct.solve(instance),
        Route::Agent => agent.solve(instance),
    }?;
    Ok(RouteRecord {
        id: instance.id.clone(),
        task: instance.task.as_str().to_owned(),
        motif: instance.motif().map(|d| d.name.clone()),
        route,
        p_hard,
        score: outcome.score,
        tokens: outcome.tokens,
    })
}

/// Accuracy/cost aggregate for one route (and overall).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RouteSummaryRow {
    pub route: String,
    pub count: usize,
    pub accuracy: f64,
    pub avg_tokens: Option<f64>,
}

pub fn route_summary(records: &[RouteRecord]) -> Vec<RouteSummaryRow> {
    let mut groups: BTreeMap<&str, Vec<&RouteRecord>> = BTreeMap::new();
    for r in records {
        let key = match r.route {
            Route::Direct => "direct",
            Route::Agent => "agent",
        };
        groups.entry(key).or_default().push(r);
        groups.entry("overall").or_default().push(r);
    }
    groups
        .into_iter()
        .map(|(route, rs)| {
            let accuracy = rs.iter().map(|r| r.score).sum::<f64>() / rs.len() as f64;
            let with_tokens: Vec<u64> = rs.iter().filter_map(|r| r.tokens).collect();
            let avg_tokens = (!with_tokens.is_empty())
                .then(|| with_tokens.iter().sum::<u64>() as f64 / with_tokens.len() as f64);
            RouteSummaryRow { route: route.to_owned(), count: rs.len(), accuracy, avg_tokens }
        })
        .collect()
}

/// Route a whole batch in parallel workers, appending one JSONL record
/// per instance.
pub fn run_routed_benchmark(
    instances: &[TaskInstance],
    policy: &RoutePolicy,
    direct: &dyn Solver,
    agent: &dyn Solver,
    concurrency: usize,
    out_path: &Path,
) -> Result<Vec<RouteRecord>, DispatchError> {
    if let Some(parent) = out_path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let mut out =
        std::fs::OpenOptions::new().create(true).append(true).open(out_path)?;

    let workers = concurrency.max(1).min(instances.len().max(1));
    let next = Arc::new(AtomicUsize::new(0));
    let (tx, rx) = mpsc::channel::<Result<RouteRecord, DispatchError>>();
    let mut records = Vec::with_capacity(instances.len());

    std::thread::scope(|scope| -> Result<(), DispatchError> {
        for _ in 0..workers {
            let next = Arc::clone(&next);
            let tx = tx.clone();
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(instance) = instances.get(i) else { break };
                let outcome = route_and_solve(instance, policy, direct, agent);
                if tx.send(outcome).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        for outcome in rx {
            let record = outcome?;
            let mut line =
                serde_json::to_string(&record).map_err(DispatchError::model_io)?;
            line.push('\n');
            out.write_all(line.as_bytes())?;
            out.flush()?;
            records.push(record);
        }
        Ok(())
    })?;

    records.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gbdt::{train_classifier, TrainParams};

    struct FixedSolver {
        score: f64,
        tokens: u64,
    }
    impl Solver for FixedSolver {
        fn solve(&self, _: &TaskInstance) -> Result<SolveOutcome, DispatchError> {
            Ok(SolveOutcome { score: self.score, tokens: Some(self.tokens), answer: None })
        }
    }

    fn tiny_model(theta: f64) -> DifficultyModel {
        // Five-feature rows; label = num_edges > 5. The learner recovers
        // the threshold split.
        let mut features = Vec::new();
        let mut labels = Vec::new();
        for i in 0..40 {
            let n = (i % 10) as f64;
            features.push(vec![n, 0.0, 0.0, 0.0, 0.0]);
            labels.push(u8::from(n > 5.0));
        }
        let mut params = TrainParams { theta, ..TrainParams::default() };
        params.holdout_frac = 0.0;
        train_classifier(&features, &labels, &params, vec![]).unwrap().model
    }

    fn sample_instances(count: usize) -> Vec<TaskInstance> {
        bench_gen::gen_dataset(bench_gen::TaskKind::Detection, Some("triangle"), count, 700)
            .unwrap()
    }

    #[test]
    fn threshold_boundaries_force_routes() {
        let instances = sample_instances(4);
        // θ = 0 routes everything to the agent; θ > 1 everything direct
        // (p_hard can never reach it).
        let always_agent = tiny_model(0.0);
        let always_direct = tiny_model(1.1);
        for instance in &instances {
            assert_eq!(
                predict_difficulty(&always_agent, instance).unwrap().route,
                Route::Agent
            );
            assert_eq!(
                predict_difficulty(&always_direct, instance).unwrap().route,
                Route::Direct
            );
        }
    }

    #[test]
    fn exactly_one_path_runs_and_costs_its_tokens() {
        let instances = sample_instances(3);
        let direct = FixedSolver { score: 0.0, tokens: 100 };
        let agent = FixedSolver { score: 1.0, tokens: 300 };

        let forced_direct = RoutePolicy::Fixed(Route::Direct);
        let forced_agent = RoutePolicy::Fixed(Route::Agent);
        for instance in &instances {
            let r = route_and_solve(instance, &forced_direct, &direct, &agent).unwrap();
            assert_eq!((r.route, r.tokens, r.score), (Route::Direct, Some(100), 0.0));
            let r = route_and_solve(instance, &forced_agent, &direct, &agent).unwrap();
            assert_eq!((r.route, r.tokens, r.score), (Route::Agent, Some(300), 1.0));
        }
    }

    #[test]
    fn path_failures_surface_as_errors() {
        struct FailingSolver;
        impl Solver for FailingSolver {
            fn solve(&self, _: &TaskInstance) -> Result<SolveOutcome, DispatchError> {
                Err(DispatchError::Path("boom".to_owned()))
            }
        }
        let instance = &sample_instances(1)[0];
        let ok = FixedSolver { score: 1.0, tokens: 1 };
        let err = route_and_solve(
            instance,
            &RoutePolicy::Fixed(Route::Direct),
            &FailingSolver,
            &ok,
        );
        assert!(err.is_err(), "no silent fallback");
    }

    #[test]
    fn random_route_is_deterministic_and_rate_follows_p() {
        let a = random_route(0.5, 9, "detection-triangle-3");
        let b = random_route(0.5, 9, "detection-triangle-3");
        assert_eq!(a, b);
        let agents = (0..1000)
            .filter(|i| random_route(0.3, 42, &format!("id-{i}")) == Route::Agent)
            .count();
        assert!((250..350).contains(&agents), "{agents} agent routes out of 1000 at p=0.3");
    }

    #[test]
    fn batch_routing_writes_records_and_summarizes() {
        let instances = sample_instances(4);
        let direct = FixedSolver { score: 0.5, tokens: 100 };
        let agent = FixedSolver { score: 1.0, tokens: 300 };
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("routes.jsonl");
        let records = run_routed_benchmark(
            &instances,
            &RoutePolicy::Random { p_agent: 0.5, seed: 7 },
            &direct,
            &agent,
            2,
            &out,
        )
        .unwrap();
        assert_eq!(records.len(), 4);
        let text = std::fs::read_to_string(&out).unwrap();
        assert_eq!(text.lines().count(), 4);
        let summary = route_summary(&records);
        let overall = summary.iter().find(|r| r.route == "overall").unwrap();
        assert_eq!(overall.count, 4);
        assert!(overall.accuracy >= 0.5 && overall.accuracy <= 1.0);
    }
}
