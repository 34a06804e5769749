use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use rand::seq::SliceRandom;
use serde_json::json;
use vmgbs::experiment::{
    accuracy_curve, compare_baselines, default_child, mean_accuracy_by_method, run_sweep,
    runtime_report, write_baseline_csv, write_sweep_csv, PairVotes, StudyConfig, SweepConfig,
};
use vmgbs::oracle::{
    generate_dataset, verify_dataset, Dataset, GenerationConfig, LabeledPair, OracleConfig,
};
use vmgbs::pipeline::{
    classical_votes, majority_vote, quantum_votes, train_gbs_model, train_spectral_model,
    FeatureKind, LinearSvmModel, DEFAULT_C, DEFAULT_SAMPLES_PER_PAIR,
};
use vmgbs::rng;

use crate::manifest::Manifest;
use crate::settings::{ModelKind, PairRep, Settings};
use crate::UsageError;

fn create_out(settings: &Settings) -> anyhow::Result<PathBuf> {
    let dir = settings.out_dir();
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir)
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

fn read_dataset(path: &Path, seed: u64) -> anyhow::Result<Dataset> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(Dataset::read_jsonl(BufReader::new(f), seed)?)
}

fn read_model(path: &Path) -> anyhow::Result<LinearSvmModel> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(LinearSvmModel::from_json(&text)?)
}

fn train_fraction(settings: &Settings) -> anyhow::Result<f64> {
    let f = settings.train_fraction.unwrap_or(0.75);
    if !(0.0..=1.0).contains(&f) {
        return Err(UsageError(format!("--train-fraction must lie in [0, 1], got {f}")).into());
    }
    Ok(f)
}

fn study(settings: &Settings, seed: u64) -> anyhow::Result<StudyConfig> {
    let d = StudyConfig::default();
    let s = StudyConfig {
        positives: settings.pos.unwrap_or(d.positives),
        negatives: settings.neg.unwrap_or(d.negatives),
        train_fraction: settings.train_fraction.unwrap_or(d.train_fraction),
        eval_pairs: settings.eval_pairs.unwrap_or(d.eval_pairs),
        votes: settings.odd_trials(d.votes)?,
        target: settings.target.unwrap_or(d.target),
        samples_per_pair: settings.samples_per_pair.unwrap_or(d.samples_per_pair),
        c: settings.c.unwrap_or(d.c),
        seed,
    };
    s.validate().map_err(|e| UsageError(e.to_string()))?;
    Ok(s)
}

pub fn gen_dataset(settings: &Settings) -> anyhow::Result<()> {
    let seed = settings.require_seed()?;
    let parent = settings.require_parent()?;
    let child = settings.child.unwrap_or_else(|| default_child(parent));
    let (pos, neg) = (settings.pos.unwrap_or(500), settings.neg.unwrap_or(500));
    let ds = generate_dataset(parent, child, pos, neg, seed, &GenerationConfig::default())?;
    let path = create_out(settings)?.join("dataset.jsonl");
    let mut w = create(&path)?;
    ds.write_jsonl(&mut w)?;
    w.flush()?;
    println!("wrote {} pairs to {}", ds.len(), path.display());
    Manifest::write(
        "gen-dataset",
        settings,
        &[],
        &[path],
        json!({ "n_parent": parent, "n_child": child, "positives": pos, "negatives": neg }),
    )?;
    Ok(())
}

pub fn train(settings: &Settings) -> anyhow::Result<()> {
    let seed = settings.require_seed()?;
    let data = settings.require_dataset()?;
    let ds = read_dataset(data, seed)?;
    let frac = train_fraction(settings)?;
    let (train, _) = ds.split(frac, seed);
    let c = settings.c.unwrap_or(DEFAULT_C);
    let kind = settings.kind.unwrap_or(ModelKind::Spectral);
    let model = match kind {
        ModelKind::Spectral => train_spectral_model(&train, c, seed)?,
        ModelKind::Gbs => {
            let spp = settings
                .samples_per_pair
                .unwrap_or(DEFAULT_SAMPLES_PER_PAIR);
            train_gbs_model(&train, &settings.quantum()?, spp, c, seed)?
        }
    };
    let path = create_out(settings)?.join("model.json");
    std::fs::write(&path, model.to_json()?)
        .with_context(|| format!("writing {}", path.display()))?;
    println!(
        "trained {} model on {} pairs, wrote {}",
        match kind {
            ModelKind::Spectral => "spectral",
            ModelKind::Gbs => "gbs",
        },
        train.len(),
        path.display()
    );
    Manifest::write(
        "train",
        settings,
        &[data],
        &[path],
        json!({ "training_pairs": train.len(), "epochs": model.epochs }),
    )?;
    Ok(())
}

fn votes_string(votes: &[vmgbs::Label]) -> String {
    votes.iter().map(|v| char::from(b'0' + v.as_u8())).collect()
}

fn held_out(ds: &Dataset, frac: f64, seed: u64) -> Vec<LabeledPair> {
    if frac == 0.0 {
        return ds.pairs.clone();
    }
    ds.split(frac, seed).1
}

pub fn eval(settings: &Settings) -> anyhow::Result<()> {
    let seed = settings.require_seed()?;
    let data = settings.require_dataset()?;
    let model_path = settings.require_model()?;
    let model = read_model(model_path)?;
    let ds = read_dataset(data, seed)?;
    let pairs = held_out(&ds, train_fraction(settings)?, seed);
    let trials = settings.odd_trials(1)?;
    let curve = settings.curve.clone().unwrap_or_default();
    if let Some(&bad) = curve.iter().find(|&&n| n % 2 == 0 || n > trials) {
        return Err(UsageError(format!(
            "--curve entries must be odd and at most --trials, got {bad}"
        ))
        .into());
    }
    let quantum = settings.quantum()?;
    if model.kind == FeatureKind::GbsSample
        && model.encoding_digest.as_deref() != Some(quantum.digest()?.as_str())
    {
        return Err(UsageError(
            "model was trained with a different encoding; pass the same --squeeze-db, loss and --cutoff flags".into(),
        )
        .into());
    }
    // pair i votes from the stream rooted at mix(seed, i)
    let records = pairs
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let s = rng::mix(seed, i as u64);
            let votes = match model.kind {
                FeatureKind::Spectral => classical_votes(&p.parent, &p.child, &model, trials, s)?,
                FeatureKind::GbsSample => {
                    quantum_votes(&p.parent, &p.child, &model, trials, &quantum, s)?
                }
            };
            Ok(PairVotes {
                truth: p.label,
                votes,
            })
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let dir = create_out(settings)?;
    let path = dir.join("eval.csv");
    let mut w = csv::Writer::from_writer(create(&path)?);
    w.write_record(["pair", "label", "prediction", "votes"])?;
    let mut hits = 0;
    for (i, r) in records.iter().enumerate() {
        let pred = majority_vote(&r.votes)?;
        hits += (pred == r.truth) as usize;
        w.write_record([
            i.to_string(),
            r.truth.as_u8().to_string(),
            pred.as_u8().to_string(),
            votes_string(&r.votes),
        ])?;
    }
    w.flush()?;
    let accuracy = hits as f64 / records.len().max(1) as f64;
    println!(
        "accuracy {accuracy:.4} over {} pairs with {trials} trials",
        records.len()
    );
    let mut outputs = vec![path];
    if !curve.is_empty() {
        let path = dir.join("curve.csv");
        let mut w = create(&path)?;
        writeln!(w, "n_trials,accuracy")?;
        for p in accuracy_curve(&records, &curve)? {
            writeln!(w, "{},{}", p.n_trials, p.accuracy)?;
        }
        w.flush()?;
        outputs.push(path);
    }
    Manifest::write(
        "eval",
        settings,
        &[data, model_path],
        &outputs,
        json!({ "pairs": records.len(), "trials": trials, "accuracy": accuracy }),
    )?;
    Ok(())
}

pub fn sweep(settings: &Settings) -> anyhow::Result<()> {
    let seed = settings.require_seed()?;
    let parent = settings.parent.unwrap_or(6);
    let study = StudyConfig {
        target: settings.target.unwrap_or(0.98),
        ..study(settings, seed)?
    };
    let cfg = SweepConfig {
        n_parent: parent,
        n_child: settings.child.unwrap_or_else(|| default_child(parent)),
        squeeze_db: settings
            .squeeze_grid
            .clone()
            .unwrap_or_else(|| vec![3.0, 5.0, 7.0]),
        loss_db: settings
            .loss_grid
            .clone()
            .unwrap_or_else(|| vec![0.0, 1.2, 3.0]),
        base: settings.quantum()?,
        study,
    };
    let cells = run_sweep(&cfg)?;
    let path = create_out(settings)?.join("sweep.csv");
    let mut w = create(&path)?;
    write_sweep_csv(&cells, &mut w)?;
    w.flush()?;
    let saturated = cells.iter().filter(|c| c.required.saturated()).count();
    println!(
        "{} cells, {saturated} saturated, wrote {}",
        cells.len(),
        path.display()
    );
    Manifest::write(
        "sweep",
        settings,
        &[],
        &[path],
        json!({ "cells": cells.len(), "saturated": saturated, "target": study.target, "cap": study.votes }),
    )?;
    Ok(())
}

pub fn runtime_model(settings: &Settings) -> anyhow::Result<()> {
    let seed = settings.require_seed()?;
    let sizes = settings.sizes.clone().unwrap_or_else(|| (6..=12).collect());
    let study = study(settings, seed)?;
    let profile = settings.profile();
    profile.validate().map_err(|e| UsageError(e.to_string()))?;
    let measure = settings.t_svm_s.is_none() || settings.t_takagi_s.is_none();
    let report = runtime_report(&sizes, &study, &profile, measure)?;
    let dir = create_out(settings)?;
    let csv_path = dir.join("runtime.csv");
    let mut w = create(&csv_path)?;
    report.write_csv(&mut w)?;
    w.flush()?;
    let json_path = dir.join("runtime.json");
    std::fs::write(&json_path, serde_json::to_string_pretty(&report)?)
        .with_context(|| format!("writing {}", json_path.display()))?;
    for r in &report.rows {
        println!(
            "N={:2} n_c={:3} n_q={:3} T_c={:.3e}s T_qgbs={:.3e}s speedup={:.1}",
            r.n, r.n_c, r.n_q, r.t_c_s, r.t_qgbs_s, r.speedup
        );
    }
    Manifest::write(
        "runtime-model",
        settings,
        &[],
        &[csv_path, json_path],
        json!({ "host": report.host, "overheads_measured": measure }),
    )?;
    Ok(())
}

pub fn baselines(settings: &Settings) -> anyhow::Result<()> {
    let seed = settings.require_seed()?;
    let sizes = settings.sizes.clone().unwrap_or_else(|| vec![7, 8, 9]);
    let repeats = settings.repeats.unwrap_or(3).max(1);
    let rep = settings.pair_kernel.unwrap_or(PairRep::Similarity);
    let wl = settings
        .wl_iterations
        .unwrap_or(vmgbs::baselines::DEFAULT_WL_ITERATIONS);
    let mut rows = Vec::new();
    for &n in &sizes {
        for k in 0..repeats {
            let s = study(settings, seed + k)?;
            let child = settings.child.unwrap_or_else(|| default_child(n));
            rows.extend(compare_baselines(n, child, &s, rep.into(), wl)?);
        }
    }
    let path = create_out(settings)?.join("baselines.csv");
    let mut w = create(&path)?;
    write_baseline_csv(&rows, &mut w)?;
    w.flush()?;
    let means = mean_accuracy_by_method(&rows);
    for (m, a) in &means {
        println!("{m:14} mean accuracy {a:.4}");
    }
    Manifest::write(
        "baselines",
        settings,
        &[],
        &[path],
        json!({ "mean_accuracy": means.into_iter().collect::<std::collections::BTreeMap<_, _>>() }),
    )?;
    Ok(())
}

pub fn verify(settings: &Settings) -> anyhow::Result<()> {
    let data = settings.require_dataset()?;
    let seed = settings.seed.unwrap_or(0);
    let ds = read_dataset(data, seed)?;
    let pairs = match settings.sample {
        Some(k) if k < ds.len() => {
            let mut idx: Vec<usize> = (0..ds.len()).collect();
            idx.shuffle(&mut rng::seeded(settings.require_seed()?));
            idx.truncate(k);
            idx.sort_unstable();
            idx.into_iter()
                .map(|i| (i, ds.pairs[i].clone()))
                .collect::<Vec<_>>()
        }
        _ => ds.pairs.iter().cloned().enumerate().collect(),
    };
    let just: Vec<LabeledPair> = pairs.iter().map(|(_, p)| p.clone()).collect();
    let bad = verify_dataset(&just, &OracleConfig::default())?;
    let path = create_out(settings)?.join("verify.csv");
    let mut w = create(&path)?;
    writeln!(w, "pair,label,agrees")?;
    for (k, (i, p)) in pairs.iter().enumerate() {
        writeln!(w, "{i},{},{}", p.label.as_u8(), !bad.contains(&k) as u8)?;
    }
    w.flush()?;
    Manifest::write(
        "verify",
        settings,
        &[data],
        &[path],
        json!({ "checked": pairs.len(), "mismatches": bad.len() }),
    )?;
    if !bad.is_empty() {
        anyhow::bail!(
            "{} of {} labels disagree with the oracle",
            bad.len(),
            pairs.len()
        );
    }
    println!("all {} labels agree with the oracle", pairs.len());
    Ok(())
}
