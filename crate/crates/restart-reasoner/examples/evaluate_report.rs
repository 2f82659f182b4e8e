//! The full evaluation protocol: paired with/without-restart trials,
//! confusion-matrix rates, time ratios, and report rendering.
//!
//! ```bash
//! cargo run -p restart-reasoner --example evaluate_report
//! ```

use restart_reasoner::config::GlobalConfig;
use restart_reasoner::generator::{generate_corpus, CorpusParams};
use restart_reasoner::harness::{evaluate_corpus, EvaluationOptions, PredictorKind};
use restart_reasoner::oracle::{AgentPolicy, PolicyKind};

fn main() {
    let config = GlobalConfig::default();
    let corpus: Vec<_> = generate_corpus(
        &CorpusParams {
            count: 10,
            ..CorpusParams::default()
        },
        42,
    )
    .into_iter()
    .enumerate()
    .map(|(i, level)| (format!("level-{i:02}"), level))
    .collect();

    let options = EvaluationOptions {
        policy: AgentPolicy::new(PolicyKind::NaiveRandomPig, 0),
        predictor: PredictorKind::Heuristic,
        trials: Some(30),
        jobs: 2,
        base_seed: 0,
    };
    let report = evaluate_corpus(&corpus, &config, &options).expect("evaluation runs");

    println!("{}", report.to_markdown());
    println!("TR > 1 means restarting saved time on that level.\n");

    // The same protocol with the oracle as its own predictor bounds the
    // error rates at zero.
    let perfect = EvaluationOptions {
        policy: AgentPolicy::new(PolicyKind::GreedyMaxDamage, 0),
        predictor: PredictorKind::Oracle,
        trials: Some(10),
        jobs: 2,
        base_seed: 0,
    };
    let bound = evaluate_corpus(&corpus, &config, &perfect).expect("evaluation runs");
    println!(
        "oracle predictor + greedy agent: FP {:.2}, FN {:.2} (always zero)",
        bound.average.false_positive, bound.average.false_negative
    );

    println!("\nCSV head:");
    for line in report.to_csv().lines().take(4) {
        println!("  {line}");
    }
    println!(
        "\naudit log: {} line-delimited trial records",
        report.audit_lines().lines().count()
    );
}
