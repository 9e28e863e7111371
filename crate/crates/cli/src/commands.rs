use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};
use wsrank::distance::{wasserstein_pp, wasserstein_qp_bruteforce, MetricChoice};
use wsrank::harness::{
    generate, h0_sublevel_graph, h0_superlevel, knn_loocv, write_synthetic, DatasetKind, FilteredGraph, GrayImage,
    Manifest,
};
use wsrank::learning::{distance_matrix, pairwise_distances, train, LabeledDataset, MetricParams, TrainingConfig};
use wsrank::reduction::{
    bar_to_bar, build_copresentation, build_presentation, epi_bar_to_bar, epi_dual_reduce, running_example, BarMorphism,
};
use wsrank::stable_rank::{interleaving_fast, stable_rank};
use wsrank::{Barcode, Contour};

use crate::args::{Cli, Command, DatasetArgs, Format, MetricArgs, PairArgs, ReduceArgs};
use crate::output::{emit, log_config, matrix_csv, real};
use crate::Validation;

pub fn run(cli: &Cli) -> Result<()> {
    let mut config = serde_json::to_value(cli)?;
    match &cli.command {
        Command::StableRank(a) => {
            let metric = resolve_metric(&a.metric)?;
            add(&mut config, "resolved_metric", metric_json(&metric));
            log_config(&config);
            let x = read_barcode(&a.barcode)?;
            let f = stable_rank(&x, &metric.choice);
            let text = match cli.format.unwrap_or(Format::Json) {
                Format::Json => f.to_json() + "\n",
                Format::Csv => {
                    let mut buf = Vec::new();
                    f.write_inverse_csv(&mut buf)?;
                    String::from_utf8(buf)?
                }
            };
            emit(a.out.as_deref(), &text)
        }
        Command::Interleave(a) => pair_command(cli, a, config, "interleaving", |x, y, m| {
            Ok(interleaving_fast(x, y, m))
        }),
        Command::Wasserstein(a) => pair_command(cli, a, config, "wasserstein", |x, y, m| {
            let (tx, ty) = (m.contour.transform_barcode(x), m.contour.transform_barcode(y));
            if m.p == m.q {
                Ok(wasserstein_pp(&tx, &ty, m.p)?)
            } else {
                Ok(wasserstein_qp_bruteforce(&tx, &ty, m.p, m.q)?)
            }
        }),
        Command::DistanceMatrix(a) => {
            let (data, ids) = load_dataset(a, &mut config)?;
            let metric = resolve_metric(&a.metric)?;
            add(&mut config, "resolved_metric", metric_json(&metric));
            log_config(&config);
            let d = matrix_for(&data, &metric)?;
            let text = match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => matrix_csv(&ids, &d),
                Format::Json => {
                    let rows: Vec<Vec<Value>> = d.iter().map(|r| r.iter().map(|&v| json_real(v)).collect()).collect();
                    json!({ "ids": ids, "matrix": rows }).to_string() + "\n"
                }
            };
            emit(a.out.as_deref(), &text)
        }
        Command::Persistence(a) => {
            log_config(&config);
            let barcode = match (&a.image, &a.vertices, &a.edges) {
                (Some(img), _, _) => h0_superlevel(&GrayImage::load(img)?),
                (None, Some(v), Some(e)) => h0_sublevel_graph(&FilteredGraph::load(v, e)?),
                _ => return Err(Validation("give --image or both --vertices and --edges".into()).into()),
            };
            let text = match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => barcode.to_csv_string(),
                Format::Json => serde_json::to_string(&barcode)? + "\n",
            };
            emit(a.out.as_deref(), &text)
        }
        Command::GenSynthetic(a) => {
            let kind = DatasetKind::from_number(a.dataset)
                .ok_or_else(|| Validation(format!("--dataset must be 1 or 2 (got {})", a.dataset)))?;
            if a.n == 0 {
                return Err(Validation("--n must be at least 1".into()).into());
            }
            log_config(&config);
            let images = generate(kind, a.n, a.seed);
            let manifest = write_synthetic(&a.out.dir, &images, kind, a.seed, a.n)
                .with_context(|| format!("writing dataset to {}", a.out.dir.display()))?;
            eprintln!("wrote {} images to {}", manifest.samples.len(), a.out.dir.display());
            Ok(())
        }
        Command::LearnMetric(a) => {
            let manifest_path = a.manifest.clone().unwrap_or_else(|| a.out.dir.join("manifest.json"));
            let mut cfg = match &a.config {
                Some(p) => TrainingConfig::from_json(&read_text(p)?).with_context(|| format!("{}", p.display()))?,
                None => TrainingConfig::default(),
            };
            if let Some(n) = a.iters {
                cfg.iters = n;
            }
            if let Some(s) = a.seed {
                cfg.seed = s;
            }
            let data = load_manifest(&manifest_path)?;
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let (opts, theta0) = cfg.resolve(&data, &mut rng)?;
            add(&mut config, "manifest", json!(manifest_path));
            add(&mut config, "training", serde_json::to_value(&cfg)?);
            add(&mut config, "theta0", serde_json::to_value(&theta0)?);
            add(&mut config, "sigma_min", json!(opts.bounds.sigma_min));
            log_config(&config);
            std::fs::create_dir_all(&a.out.dir)?;
            let (best, best_loss, trace, failure) = match train(&data, &theta0, &opts) {
                Ok(r) => (Some(r.best), r.best_loss, r.trace, None),
                Err(f) => (None, f64::NAN, f.trace.clone(), Some(f)),
            };
            let mut csv = String::from("iter,loss,best_loss");
            for name in MetricParams::coordinate_names(theta0.k()) {
                csv.push(',');
                csv.push_str(&name);
            }
            csv.push('\n');
            for row in &trace {
                csv.push_str(&format!("{},{},{}", row.iter, real(row.loss), real(row.best_loss)));
                for v in &row.theta {
                    csv.push(',');
                    csv.push_str(&real(*v));
                }
                csv.push('\n');
            }
            emit(Some(&a.out.dir.join("trace.csv")), &csv)?;
            if let Some(f) = failure {
                return Err(anyhow::Error::new(f.error).context("training aborted; trace.csv holds the run so far"));
            }
            let best = best.expect("successful run");
            let learned = json!({
                "mu": best.mu, "sigma": best.sigma, "lambda": best.lambda, "p": best.p,
                "floor": opts.floor, "loss": best_loss, "initial_loss": trace[0].loss,
            });
            emit(Some(&a.out.dir.join("theta.json")), &(serde_json::to_string_pretty(&learned)? + "\n"))?;
            eprintln!("loss {} -> {}", real(trace[0].loss), real(best_loss));
            Ok(())
        }
        Command::Classify(a) => {
            let (data, ids) = load_dataset(&a.dataset, &mut config)?;
            let metric = resolve_metric(&a.dataset.metric)?;
            add(&mut config, "resolved_metric", metric_json(&metric));
            log_config(&config);
            let d = matrix_for(&data, &metric)?;
            let report = knn_loocv(&d, &data.labels(), &ids, a.k)?;
            let text = match cli.format.unwrap_or(Format::Json) {
                Format::Json => json!({
                    "k": report.k, "n": ids.len(), "errors": report.errors, "error_rate": report.error_rate,
                    "predictions": ids.iter().zip(&report.predictions)
                        .map(|(id, l)| json!({"id": id, "label": l})).collect::<Vec<_>>(),
                })
                .to_string()
                    + "\n",
                Format::Csv => {
                    let mut s = String::from("id,label,predicted\n");
                    for ((id, s_), p) in ids.iter().zip(data.samples()).zip(&report.predictions) {
                        s.push_str(&format!("{id},{},{p}\n", s_.label));
                    }
                    s
                }
            };
            emit(a.dataset.out.as_deref(), &text)
        }
        Command::Reduce(a) => {
            log_config(&config);
            reduce(cli, a)
        }
    }
}

fn add(config: &mut Value, key: &str, value: Value) {
    if let Some(obj) = config.as_object_mut() {
        obj.insert(key.into(), value);
    }
}

fn json_real(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(real(x))
    }
}

fn read_text(p: &Path) -> Result<String> {
    std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
}

fn read_barcode(p: &Path) -> Result<Barcode> {
    Barcode::from_csv_str(&read_text(p)?).with_context(|| format!("{}", p.display()))
}

/// The metric of a run: either a fixed choice or learned parameters.
struct ResolvedMetric {
    choice: MetricChoice,
    params: Option<(MetricParams, f64)>,
}

fn metric_json(m: &ResolvedMetric) -> Value {
    json!({
        "p": m.choice.p, "q": m.choice.q, "contour": serde_json::to_value(&m.choice.contour).unwrap_or(Value::Null),
    })
}

#[derive(Deserialize)]
struct ParamsFile {
    #[serde(flatten)]
    params: MetricParams,
    floor: Option<f64>,
}

fn resolve_metric(a: &MetricArgs) -> Result<ResolvedMetric> {
    if let Some(path) = &a.params {
        let file: ParamsFile =
            serde_json::from_str(&read_text(path)?).with_context(|| format!("{}", path.display()))?;
        let p = file.params;
        let params = MetricParams::new(p.mu, p.sigma, p.lambda, p.p).with_context(|| format!("{}", path.display()))?;
        let floor = file.floor.unwrap_or(wsrank::contour::DEFAULT_FLOOR);
        let choice = params.metric(floor)?;
        return Ok(ResolvedMetric { choice, params: Some((params, floor)) });
    }
    let contour = if a.contour == "standard" {
        Contour::Standard
    } else {
        let path = PathBuf::from(&a.contour);
        Contour::from_json(&read_text(&path)?).with_context(|| format!("{}", path.display()))?
    };
    Ok(ResolvedMetric { choice: MetricChoice::new(a.p, a.q, contour)?, params: None })
}

fn pair_command(
    cli: &Cli,
    a: &PairArgs,
    mut config: Value,
    name: &str,
    f: impl Fn(&Barcode, &Barcode, &MetricChoice) -> Result<f64>,
) -> Result<()> {
    let metric = resolve_metric(&a.metric)?;
    add(&mut config, "resolved_metric", metric_json(&metric));
    log_config(&config);
    let x = read_barcode(&a.x)?;
    let y = read_barcode(&a.y)?;
    let d = f(&x, &y, &metric.choice)?;
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => format!("{}\n", real(d)),
        Format::Json => json!({ name: json_real(d) }).to_string() + "\n",
    };
    emit(a.out.as_deref(), &text)
}

fn load_manifest(path: &Path) -> Result<LabeledDataset> {
    let manifest = Manifest::load(path)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    Ok(manifest.load_dataset(dir)?)
}

fn load_dataset(a: &DatasetArgs, config: &mut Value) -> Result<(LabeledDataset, Vec<String>)> {
    let path = a.manifest.clone().unwrap_or_else(|| a.out_dir.dir.join("manifest.json"));
    add(config, "manifest", json!(path));
    let data = load_manifest(&path)?;
    let ids = data.samples().iter().map(|s| s.id.clone()).collect();
    Ok((data, ids))
}

fn matrix_for(data: &LabeledDataset, m: &ResolvedMetric) -> Result<Vec<Vec<f64>>> {
    Ok(match &m.params {
        Some((theta, floor)) => distance_matrix(data, theta, *floor)?,
        None => pairwise_distances(&data.barcodes(), &m.choice),
    })
}

fn reduce(cli: &Cli, a: &ReduceArgs) -> Result<()> {
    let f: BarMorphism = match (&a.demo, &a.input) {
        (Some(_), _) => running_example(),
        (None, Some(p)) => BarMorphism::from_json(&read_text(p)?).with_context(|| format!("{}", p.display()))?,
        (None, None) => return Err(Validation("give --demo or --input".into()).into()),
    };
    let json_out = cli.format == Some(Format::Json);
    let mut text = String::new();
    let value = if a.epi {
        let c = build_copresentation(&f)?;
        let red = epi_dual_reduce(&c)?;
        let (fb, cb) = epi_bar_to_bar(&c)?;
        let red_b = epi_dual_reduce(&cb)?;
        text.push_str(&format!("copresentation of f\n{c}\n"));
        text.push_str(&format!("reduced\n{}\n", red.reduction.matrix()));
        text.push_str(&format!("copresentation of f_b\n{cb}\n"));
        text.push_str(&format!("sigma_f = {}\nsigma_b = {}\n", red.sigma, red_b.sigma));
        text.push_str(&format!("ker f   = {}\nker f_b = {}\n", bars_text(&red.kernel), bars_text(&red_b.kernel)));
        json!({
            "sigma_f": red.sigma.to_string(), "sigma_b": red_b.sigma.to_string(),
            "kernel": serde_json::to_value(&red.kernel)?, "kernel_b": serde_json::to_value(&red_b.kernel)?,
            "bar_to_bar": serde_json::to_value(&fb)?,
        })
    } else {
        let m = build_presentation(&f)?;
        let red = m.reduce();
        let out = bar_to_bar(&m)?;
        let red_b = out.bar_to_bar.reduce();
        let (coker, coker_b) = (red.cokernel()?, red_b.cokernel()?);
        text.push_str(&format!("M_f\n{m}\n"));
        text.push_str(&format!("M_f reduced\n{}\n", red.matrix()));
        text.push_str(&format!("M_f*\n{}\n", out.partially_reduced));
        text.push_str(&format!("M_b\n{}\n", out.bar_to_bar));
        text.push_str(&format!("M_b reduced\n{}\n", red_b.matrix()));
        text.push_str(&format!("sigma_f = {}\nsigma_b = {}\n", red.sigma(), red_b.sigma()));
        text.push_str(&format!("coker f   = {}\ncoker f_b = {}\n", bars_text(&coker), bars_text(&coker_b)));
        json!({
            "sigma_f": red.sigma().to_string(), "sigma_b": red_b.sigma().to_string(),
            "m_f": m.to_dense(), "m_f_reduced": red.matrix().to_dense(),
            "m_f_star": out.partially_reduced.to_dense(), "m_b": out.bar_to_bar.to_dense(),
            "m_b_reduced": red_b.matrix().to_dense(),
            "cokernel": serde_json::to_value(&coker)?, "cokernel_b": serde_json::to_value(&coker_b)?,
            "bar_to_bar": serde_json::to_value(out.morphism(&f))?,
        })
    };
    let body = if json_out { serde_json::to_string_pretty(&value)? + "\n" } else { text };
    emit(a.out.as_deref(), &body)
}

fn bars_text(x: &Barcode) -> String {
    let parts: Vec<String> = x.sorted().iter().map(|b| format!("[{}, {})", real(b.birth()), real(b.death()))).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}
