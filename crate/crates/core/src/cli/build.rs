use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::Context;
use rayon::prelude::*;
use serde_json::json;

use crate::corpus::{for_each_context, ConllFormat, ConllReader, ContextSpec, Pos, Sentence, VocabCounter, Vocabulary};
use crate::space::{save_space, CountAccumulator, WeightedSpace, Weighting, WordPmiTable, AUX_CONTEXT};

use super::{args::BuildArgs, config::FileConfig, manifest::Manifest, thread_pool};

const CHUNK: usize = 4096;

/// Feed the corpus to `f` in chunks of sentences. Returns the number of
/// malformed sentences skipped.
fn for_each_chunk<R: BufRead>(
    input: R,
    format: &ConllFormat,
    mut f: impl FnMut(&[Sentence]),
) -> anyhow::Result<usize> {
    let mut reader = ConllReader::with_format(input, format.clone());
    let mut chunk = Vec::with_capacity(CHUNK);
    for s in reader.by_ref() {
        chunk.push(s?);
        if chunk.len() == CHUNK {
            f(&chunk);
            chunk.clear();
        }
    }
    if !chunk.is_empty() {
        f(&chunk);
    }
    Ok(reader.skipped())
}

fn open(path: &Path) -> anyhow::Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path).with_context(|| format!("opening {}", path.display()))?))
}

pub fn count_vocabulary(path: &Path, format: &ConllFormat, min_freq: u64) -> anyhow::Result<(Vocabulary, usize)> {
    let mut total = VocabCounter::new(&Pos::CONTENT);
    let skipped = for_each_chunk(open(path)?, format, |chunk| {
        let part = chunk
            .par_iter()
            .fold(
                || VocabCounter::new(&Pos::CONTENT),
                |mut c, s| {
                    c.add_sentence(s);
                    c
                },
            )
            .reduce(|| VocabCounter::new(&Pos::CONTENT), VocabCounter::merge);
        total = std::mem::take(&mut total).merge(part);
    })?;
    Ok((total.finish(min_freq), skipped))
}

/// Count co-occurrences for every spec in `specs` in a single pass.
pub fn count_contexts(
    path: &Path,
    format: &ConllFormat,
    vocab: &Vocabulary,
    specs: &[ContextSpec],
) -> anyhow::Result<Vec<CountAccumulator>> {
    let fresh = || vec![CountAccumulator::new(); specs.len()];
    let merge = |a: Vec<CountAccumulator>, b: Vec<CountAccumulator>| {
        a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect::<Vec<_>>()
    };
    let mut total = fresh();
    for_each_chunk(open(path)?, format, |chunk| {
        let part = chunk
            .par_iter()
            .fold(fresh, |mut accs, s| {
                for (acc, spec) in accs.iter_mut().zip(specs) {
                    for_each_context(s, spec, vocab, |t, c| acc.add(t, c));
                }
                accs
            })
            .reduce(fresh, merge);
        total = merge(std::mem::take(&mut total), part);
    })?;
    Ok(total)
}

pub fn build_space(args: BuildArgs) -> anyhow::Result<()> {
    let file = match &args.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let format = file.conll_format()?;
    let spec = args.context.or(file.context).unwrap_or_else(ContextSpec::dep);
    let weighting = args.weighting.or(file.weighting).unwrap_or(Weighting::Ppmi);
    let min_freq = args.min_freq.or(file.min_freq).unwrap_or(1);
    let normalize = args.normalize_entropy || file.normalize_entropy.unwrap_or(false);
    if !spec.is_canonical() {
        eprintln!("note: context type {spec} is not one of win2, win2d, win5, win5d, dep, joint");
    }

    let pool = thread_pool(args.jobs.or(file.jobs))?;
    let (space, aux, skipped) = pool.install(|| -> anyhow::Result<_> {
        let (vocab, skipped) = count_vocabulary(&args.corpus, &format, min_freq)?;
        let mut specs = vec![spec];
        if args.aux.is_some() {
            specs.push(AUX_CONTEXT);
        }
        let mut accs = count_contexts(&args.corpus, &format, &vocab, &specs)?.into_iter();
        let counts = accs.next().expect("one accumulator per spec").finish(vocab.len());
        let aux = match accs.next() {
            Some(acc) => Some(WordPmiTable::<f64>::from_counts(vocab.clone(), acc.finish(vocab.len()))?),
            None => None,
        };
        let space = WeightedSpace::<f64>::new(vocab, spec, counts, weighting, normalize)?;
        Ok((space, aux, skipped))
    })?;
    if skipped > 0 {
        eprintln!("skipped {skipped} malformed sentence(s)");
    }

    let mut outputs = vec![args.out.clone()];
    save_space(&space, &args.out)?;
    if let (Some(path), Some(aux)) = (&args.aux, &aux) {
        save_space(aux.space(), path)?;
        outputs.push(path.clone());
    }
    if let Some(path) = &args.text {
        let mut w = BufWriter::new(fs::File::create(path)?);
        space.export_text(&mut w)?;
        w.flush()?;
        outputs.push(path.clone());
    }
    eprintln!(
        "{} targets x {} contexts, {} non-zero cells ({spec}, {weighting})",
        space.n_targets(),
        space.contexts().len(),
        space.nnz()
    );

    let mut manifest = Manifest::new(
        "build-space",
        json!({ "corpus": args.corpus, "config": args.config }),
        json!({
            "context": spec,
            "weighting": weighting,
            "min_freq": min_freq,
            "normalize_entropy": normalize,
            "columns": format.columns,
            "pos_map": file.pos_map,
            "aux": args.aux.is_some(),
        }),
    );
    manifest.stats = json!({
        "targets": space.n_targets(),
        "contexts": space.contexts().len(),
        "nnz": space.nnz(),
        "skipped_sentences": skipped,
    });
    manifest.outputs = outputs;
    manifest.write()
}
