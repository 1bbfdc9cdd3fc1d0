use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use rayon::prelude::*;
use serde_json::json;

use crate::eval::{
    self, conflate_multilabel, default_grid, load_dataset, markdown_table, pos_augment, split_random,
    switched_pairs, write_dataset, Dataset, EvaluationReport, LabelMap, RelationFilter, RelationPair, RunInfo,
    ScoredItem,
};
use crate::measures::{MeasureConfig, Scorer};
use crate::space::{load_space, WeightedSpace, WordPmiTable};

use super::args::{DatasetArgs, EvaluateArgs, ScoreArgs, SwitchArgs, TuneArgs};
use super::{manifest::Manifest, thread_pool, UsageError};

pub const SCORE_HEADER: &str = "x\ty\tgold_relation\tmeasure\tcontext_type\tweighting\tparams\tscore\tdefined\treason";

/// Load, relabel, optionally POS-tag, and conflate a dataset.
fn prepare_dataset(args: &DatasetArgs, space: &WeightedSpace<f64>) -> anyhow::Result<Vec<RelationPair>> {
    let data = load_dataset(&args.dataset).with_context(|| format!("reading {}", args.dataset.display()))?;
    let mut pairs = data.pairs;
    if let Some(path) = &args.label_map {
        pairs = LabelMap::load(path)?.apply(pairs);
    }
    if args.pos_augment {
        let (tagged, dropped) = pos_augment(&pairs, |w| space.target_id(w).is_some());
        if dropped > 0 {
            eprintln!("pos augmentation dropped {dropped} pair(s) with no tagged variant in the space");
        }
        pairs = tagged;
    }
    Ok(conflate_multilabel(pairs))
}

fn load_inputs(space: &Path, aux: Option<&Path>) -> anyhow::Result<(WeightedSpace<f64>, Option<WordPmiTable<f64>>)> {
    let s = load_space(space).with_context(|| format!("loading {}", space.display()))?;
    let a = match aux {
        Some(p) => Some(WordPmiTable::from_space(
            load_space(p).with_context(|| format!("loading {}", p.display()))?,
        )?),
        None => None,
    };
    Ok((s, a))
}

fn fmt_score(score: Option<f64>) -> String {
    score.map_or_else(|| "-".to_owned(), |s| s.to_string())
}

pub fn score(args: ScoreArgs) -> anyhow::Result<()> {
    let measures = args.measures().map_err(UsageError)?;
    let (space, aux) = load_inputs(&args.space, args.aux.as_deref())?;
    let pairs = prepare_dataset(&args.data, &space)?;
    let configs: Vec<MeasureConfig> = measures
        .iter()
        .map(|&m| {
            let mut c = MeasureConfig::new(m).with_n(args.n).with_aggregate(args.aggregate).with_sort(args.sort_weighting);
            c.ap_inc_norm = args.ap_inc_norm();
            c.canonical()
        })
        .collect();
    if configs.iter().any(|c| c.measure.uses_n() && c.n == 0) {
        return Err(UsageError("--N must be at least 1".into()).into());
    }

    let mut scorer = Scorer::new(&space);
    if let Some(a) = &aux {
        scorer = scorer.with_aux(a);
    }
    let context_type = space.context_spec().to_string();
    let weighting = space.weighting().name();

    let pool = thread_pool(args.jobs)?;
    let mut body = String::new();
    for cfg in &configs {
        let rows: Vec<String> = pool.install(|| {
            pairs
                .par_iter()
                .map(|p| {
                    let s = scorer.score_pair(&p.x, &p.y, cfg);
                    format!(
                        "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                        p.x,
                        p.y,
                        p.relation,
                        cfg.measure,
                        context_type,
                        weighting,
                        cfg.params(),
                        fmt_score(s.score),
                        s.defined(),
                        s.reason.unwrap_or("-"),
                    )
                })
                .collect()
        });
        rows.iter().for_each(|r| body.push_str(r));
    }
    let mut w = BufWriter::new(fs::File::create(&args.out)?);
    writeln!(w, "{SCORE_HEADER}")?;
    w.write_all(body.as_bytes())?;
    w.flush()?;

    let mut m = Manifest::new(
        "score",
        json!({ "space": args.space, "aux": args.aux, "dataset": args.data.dataset, "label_map": args.data.label_map }),
        json!({
            "measures": configs,
            "pos_augment": args.data.pos_augment,
            "context_type": context_type,
            "weighting": weighting,
        }),
    );
    m.stats = json!({ "pairs": pairs.len() });
    m.outputs = vec![args.out];
    m.write()
}

/// Scored pairs of one `(measure, params, context type, weighting)` block
/// of a score file.
#[derive(Debug, Clone)]
pub struct ScoreBlock {
    pub info: RunInfo,
    pub items: Vec<ScoredItem>,
}

pub fn read_scores(path: &Path) -> anyhow::Result<Vec<ScoreBlock>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == SCORE_HEADER => {}
        _ => bail!("{}: missing score header", path.display()),
    }
    let mut blocks: Vec<ScoreBlock> = Vec::new();
    let mut index: HashMap<(String, String, String, String), usize> = HashMap::new();
    for (i, line) in lines {
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 10 {
            bail!("{}:{}: expected 10 columns, found {}", path.display(), i + 1, f.len());
        }
        let score = match f[7] {
            "-" => None,
            s => Some(s.parse::<f64>().with_context(|| format!("{}:{}: bad score", path.display(), i + 1))?),
        };
        let key = (f[3].to_owned(), f[6].to_owned(), f[4].to_owned(), f[5].to_owned());
        let b = *index.entry(key).or_insert_with(|| {
            blocks.push(ScoreBlock {
                info: RunInfo {
                    dataset: String::new(),
                    measure: f[3].to_owned(),
                    params: f[6].to_owned(),
                    context_type: f[4].to_owned(),
                    weighting: f[5].to_owned(),
                },
                items: Vec::new(),
            });
            blocks.len() - 1
        });
        blocks[b].items.push(ScoredItem {
            x: f[0].to_owned(),
            y: f[1].to_owned(),
            relation: f[2].to_owned(),
            score,
        });
    }
    Ok(blocks)
}

/// Relabel scored items from `dataset`. Scored pairs missing from the
/// dataset are dropped; dataset pairs without a score become scoreless.
pub fn join_dataset(items: &[ScoredItem], dataset: &Dataset) -> Vec<ScoredItem> {
    let scores: HashMap<(&str, &str), Option<f64>> =
        items.iter().map(|i| ((i.x.as_str(), i.y.as_str()), i.score)).collect();
    let mut out = Vec::with_capacity(dataset.len());
    let mut seen = std::collections::HashSet::new();
    for p in conflate_multilabel(dataset.pairs.clone()) {
        if seen.insert((p.x.clone(), p.y.clone(), p.relation.clone())) {
            let s = scores.get(&(p.x.as_str(), p.y.as_str())).copied().flatten();
            out.push(ScoredItem::new(&p, s));
        }
    }
    out
}

fn relation_filters(requested: &[String], items: &[ScoredItem]) -> Vec<RelationFilter> {
    let mut out: Vec<RelationFilter> = Vec::new();
    let mut push = |f: RelationFilter| {
        if !out.contains(&f) {
            out.push(f);
        }
    };
    for r in requested {
        if r == "each" {
            push(RelationFilter::All);
            let mut labels: Vec<&str> =
                items.iter().filter(|i| !i.is_hypernym()).map(|i| i.relation.as_str()).collect();
            labels.sort_unstable();
            labels.dedup();
            for l in labels {
                push(RelationFilter::Only(l.to_owned()));
            }
        } else {
            push(r.parse().expect("infallible"));
        }
    }
    out
}

pub fn evaluate(args: EvaluateArgs) -> anyhow::Result<()> {
    let blocks = read_scores(&args.scores)?;
    let dataset = match &args.dataset {
        Some(p) => Some(load_dataset(p).with_context(|| format!("reading {}", p.display()))?),
        None => None,
    };
    let name = args.name.clone().unwrap_or_else(|| {
        let p = args.dataset.as_ref().unwrap_or(&args.scores);
        p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
    });

    let mut reports: Vec<EvaluationReport> = Vec::new();
    for block in blocks {
        let items = match &dataset {
            Some(d) => join_dataset(&block.items, d),
            None => block.items,
        };
        let info = RunInfo { dataset: name.clone(), ..block.info };
        for filter in relation_filters(&args.relation, &items) {
            let r = eval::evaluate(&items, &filter, &args.k, info.clone())
                .with_context(|| format!("{} [{}] vs {filter}", info.measure, info.params))?;
            reports.push(r);
        }
    }

    let mut jsonl = String::new();
    for r in &reports {
        let _ = writeln!(jsonl, "{}", r.to_json_line());
    }
    let table = markdown_table(&reports);
    match &args.out {
        Some(out) => {
            let md = out.with_extension("md");
            fs::write(out, &jsonl)?;
            fs::write(&md, &table)?;
            print!("{table}");
            let mut m = Manifest::new(
                "evaluate",
                json!({ "scores": args.scores, "dataset": args.dataset }),
                json!({ "relation": args.relation, "k": args.k, "name": name }),
            );
            m.outputs = vec![out.clone(), md];
            m.write()?;
        }
        None => {
            print!("{jsonl}");
            print!("{table}");
        }
    }
    Ok(())
}

pub fn tune(args: TuneArgs) -> anyhow::Result<()> {
    let (space, aux) = load_inputs(&args.space, args.aux.as_deref())?;
    let pairs = prepare_dataset(&args.data, &space)?;
    let split = split_random(&pairs, args.seed);

    let mut grid = default_grid(args.measure);
    if !args.n.is_empty() {
        if !args.measure.uses_n() {
            return Err(UsageError(format!("{} takes no N", args.measure)).into());
        }
        let rest: Vec<MeasureConfig> = grid.iter().filter(|c| c.n == grid[0].n).copied().collect();
        grid = args.n.iter().flat_map(|&n| rest.iter().map(move |c| c.with_n(n))).collect();
    }
    if let Some(a) = args.aggregate {
        grid.retain(|c| !args.measure.uses_entropy_params() || c.aggregate == a);
    }
    if let Some(s) = args.sort_weighting {
        grid.retain(|c| !args.measure.uses_entropy_params() || c.sort_weighting == s);
    }
    if grid.iter().any(|c| c.measure.uses_n() && c.n == 0) {
        return Err(UsageError("--N values must be at least 1".into()).into());
    }

    let mut scorer = Scorer::new(&space);
    if let Some(a) = &aux {
        scorer = scorer.with_aux(a);
    }
    let pool = thread_pool(args.jobs)?;
    let outcome = pool
        .install(|| {
            eval::tune(&grid, &split.validation, &args.relation, |cfg, p| {
                scorer.score_pair(&p.x, &p.y, cfg).score
            })
        })
        .context("tuning on the validation split")?;

    println!("best {} AP@100={:.4}", outcome.best, outcome.ap_at_100);
    let record = json!({
        "best": outcome.best,
        "params": outcome.best.params(),
        "ap_at_100": outcome.ap_at_100,
        "relation": args.relation.to_string(),
        "seed": args.seed,
        "validation_pairs": split.validation.len(),
        "trials": outcome.trials,
    });
    fs::write(&args.out, serde_json::to_string_pretty(&record)? + "\n")?;
    let mut m = Manifest::new(
        "tune",
        json!({ "space": args.space, "aux": args.aux, "dataset": args.data.dataset, "label_map": args.data.label_map }),
        json!({
            "measure": args.measure,
            "grid": grid,
            "relation": args.relation.to_string(),
            "seed": args.seed,
            "pos_augment": args.data.pos_augment,
        }),
    );
    m.outputs = vec![args.out];
    m.write()
}

pub fn switch_pairs(args: SwitchArgs) -> anyhow::Result<()> {
    let data = load_dataset(&args.dataset).with_context(|| format!("reading {}", args.dataset.display()))?;
    let switched = switched_pairs(&data.pairs, args.seed);
    let mut w = BufWriter::new(fs::File::create(&args.out)?);
    write_dataset(&data.pairs, &mut w)?;
    write_dataset(&switched, &mut w)?;
    w.flush()?;
    eprintln!("added {} switched pair(s)", switched.len());
    let mut m = Manifest::new("switch-pairs", json!({ "dataset": args.dataset }), json!({ "seed": args.seed }));
    m.stats = json!({ "switched": switched.len() });
    m.outputs = vec![PathBuf::from(&args.out)];
    m.write()
}
