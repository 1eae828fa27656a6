use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};

use nod_core::divergence::{compare_profiles, nod_with, LayerAlignment, NetworkProfile};
use nod_core::experiment::{
    grid_to_tsv, run_dispersal, run_divergence_grid, DispersalConfig, Ensemble, Family,
    GridConfig, VarianceEstimate,
};
use nod_core::graph::{parse_edge_list_bytes, read_edge_list, Graph};
use nod_core::mdl::{select_model, MdlReport, Model};
use nod_core::onion::onion_decompose;
use nod_core::sampling::{SampleRequest, SampleTarget};
use nod_core::stats::{extract_ccm, extract_lccm, extract_lcm, LayeredStats};
use nod_core::Error;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{
    Align, CompareArgs, DecomposeArgs, DispersalArgs, Format, GridArgs, InputArgs, MdlArgs,
    SampleArgs, SampleModel,
};

/// Why a command failed, which fixes the exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Data(String),
    Exhausted(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
            Failure::Exhausted(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::Exhausted(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::AttemptsExhausted { .. } => Failure::Exhausted(e.to_string()),
            Error::InvalidParameter(_) => Failure::Usage(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

pub type Outcome<T = ()> = std::result::Result<T, Failure>;

pub struct Context {
    pub quiet: bool,
}

impl Context {
    pub fn warn(&self, message: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("warning: {}", message.as_ref());
        }
    }
}

fn read_graph(path: &Path) -> Outcome<Graph> {
    let parsed = if path.as_os_str() == "-" {
        let mut bytes = Vec::new();
        std::io::stdin().read_to_end(&mut bytes)?;
        parse_edge_list_bytes(&bytes)
    } else {
        read_edge_list(path)
    };
    parsed.map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(path, text)?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn to_json(value: &impl serde::Serialize) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable output");
    text.push('\n');
    text
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let now = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .unwrap_or_default();
        now.as_nanos() as u64 ^ u64::from(std::process::id()).rotate_left(32)
    })
}

fn alignment(align: Align) -> LayerAlignment {
    match align {
        Align::Index => LayerAlignment::Index,
        Align::Coreness => LayerAlignment::Coreness,
    }
}

/// Regular, non-hidden files of `dir` in name order.
fn list_files(dir: &Path) -> Outcome<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir)
        .map_err(|e| Failure::Data(format!("{}: {e}", dir.display())))?
    {
        let entry = entry?;
        let hidden = entry.file_name().to_string_lossy().starts_with('.');
        if entry.file_type()?.is_file() && !hidden {
            files.push(entry.path());
        }
    }
    files.sort();
    Ok(files)
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

pub const NODES_HEADER: &str = "node\tdegree\tcoreness\tlayer";
pub const LAYERS_HEADER: &str = "layer\tcoreness\tcount\tfraction\tmean_degree";

pub fn decompose(args: &DecomposeArgs) -> Outcome {
    let g = read_graph(&args.input)?;
    let d = onion_decompose(&g);
    let degrees = g.degrees();
    if args.format == Format::Json {
        let nodes: Vec<Value> = (0..g.node_count())
            .map(|v| {
                json!({
                    "node": g.label(v),
                    "degree": degrees[v],
                    "coreness": d.coreness(v),
                    "layer": d.layer(v),
                })
            })
            .collect();
        let text = to_json(&json!({ "nodes": nodes, "layers": d.layer_table() }));
        let out = args.out.as_ref().map(|dir| dir.join("decomposition.json"));
        return emit(out.as_deref(), &text);
    }
    let mut nodes = format!("{NODES_HEADER}\n");
    for v in 0..g.node_count() {
        let _ = writeln!(
            nodes,
            "{}\t{}\t{}\t{}",
            g.label(v),
            degrees[v],
            d.coreness(v),
            d.layer(v)
        );
    }
    let mut layers = format!("{LAYERS_HEADER}\n");
    for row in d.layer_table() {
        let _ = writeln!(
            layers,
            "{}\t{}\t{}\t{}\t{}",
            row.layer, row.coreness, row.count, row.fraction, row.mean_degree
        );
    }
    match &args.out {
        Some(dir) => {
            emit(Some(&dir.join("nodes.tsv")), &nodes)?;
            emit(Some(&dir.join("layers.tsv")), &layers)
        }
        None => emit(None, &format!("{nodes}\n{layers}")),
    }
}

pub fn stats(args: &InputArgs) -> Outcome {
    let g = read_graph(&args.input)?;
    let d = onion_decompose(&g);
    let ccm = extract_ccm(&g);
    let lcm = extract_lcm(&g, &d);
    let lccm = extract_lccm(&g, &d);

    let histogram: Vec<Value> = g
        .degree_histogram()
        .counts()
        .iter()
        .map(|(k, n)| json!({ "degree": k, "count": n }))
        .collect();
    let degree_edges: Vec<Value> = ccm
        .edges()
        .iter()
        .map(|((k, k2), n)| json!({ "degree": k, "degree2": k2, "count": n }))
        .collect();
    let joint: Vec<Value> = lcm
        .joint_counts()
        .iter()
        .map(|(t, n)| json!({ "degree": t.degree, "layer": t.layer, "count": n }))
        .collect();
    let colored: Vec<Value> = lcm
        .colored_counts()
        .iter()
        .map(|((t, s), n)| {
            json!({
                "degree": t.degree, "layer": t.layer,
                "red": s.red, "green": s.green, "black": s.black, "count": n,
            })
        })
        .collect();
    let layer_edges: Vec<Value> = lcm
        .layer_edges()
        .iter()
        .map(|((l, l2), n)| json!({ "layer": l, "layer2": l2, "count": n }))
        .collect();
    let layer_stubs: Vec<Value> = lcm
        .layers()
        .into_iter()
        .map(|l| {
            json!({
                "layer": l,
                "coreness": lcm.layer_coreness().get(&l),
                "red": lcm.red(l), "green": lcm.green(l), "black": lcm.black(l),
            })
        })
        .collect();
    let type_edges: Vec<Value> = lccm
        .type_edges()
        .iter()
        .map(|((a, b), n)| {
            json!({
                "degree": a.degree, "layer": a.layer,
                "degree2": b.degree, "layer2": b.layer, "count": n,
            })
        })
        .collect();
    let type_stubs: Vec<Value> = lccm
        .stub_tallies()
        .iter()
        .map(|(t, s)| {
            json!({
                "degree": t.degree, "layer": t.layer,
                "red": s.red, "green": s.green, "black": s.black,
            })
        })
        .collect();

    let report = json!({
        "nodes": g.node_count(),
        "edges": g.edge_count(),
        "degree_histogram": histogram,
        "layer_table": d.layer_table(),
        "cm": { "degree_classes": ccm.num_classes(), "degree_histogram": histogram },
        "ccm": { "degree_classes": ccm.num_classes(), "degree_edges": degree_edges },
        "lcm": {
            "layers": lcm.num_layers(),
            "joint_counts": joint,
            "colored_counts": colored,
            "layer_edges": layer_edges,
            "layer_stubs": layer_stubs,
        },
        "lccm": {
            "joint_types": lccm.num_joint_types(),
            "joint_counts": joint,
            "type_edges": type_edges,
            "type_stubs": type_stubs,
        },
    });
    emit(None, &to_json(&report))
}

/// Column order of `mdl --corpus`.
pub fn corpus_header() -> String {
    let mut cols = vec!["name", "N", "E", "mean_degree"]
        .into_iter()
        .map(String::from)
        .collect::<Vec<_>>();
    for m in Model::ALL {
        for q in ["S_nats", "S_bits", "L_nats", "L_bits"] {
            cols.push(format!("{q}_{m}"));
        }
    }
    for m in Model::ALL {
        cols.push(format!("compression_{m}"));
    }
    cols.extend(["selected".into(), "error".into()]);
    cols.join("\t")
}

fn corpus_row(name: &str, result: &Outcome<MdlReport>) -> String {
    let report = match result {
        Ok(report) => report,
        Err(e) => {
            // every column between the name and the error is unavailable
            let width = corpus_header().split('\t').count();
            let blanks = vec!["NA"; width - 2].join("\t");
            return format!("{name}\t{blanks}\t{}", e.message().replace(['\t', '\n'], " "));
        }
    };
    let mut row = vec![
        name.to_string(),
        report.nodes.to_string(),
        report.edges.to_string(),
        report.mean_degree.to_string(),
    ];
    for m in Model::ALL {
        let s = report.score(m);
        row.extend([
            s.entropy_nats.to_string(),
            (s.entropy_nats / std::f64::consts::LN_2).to_string(),
            s.dl_nats.to_string(),
            s.dl_bits.to_string(),
        ]);
    }
    for m in Model::ALL {
        let cf = report.score(m).compression_factor;
        row.push(cf.map_or_else(|| "NA".into(), |c| c.to_string()));
    }
    row.push(report.selected_model.to_string());
    row.push(String::new());
    row.join("\t")
}

pub fn mdl(args: &MdlArgs, ctx: &Context) -> Outcome {
    if let Some(dir) = &args.corpus {
        let files = list_files(dir)?;
        let results: Vec<Outcome<MdlReport>> = files
            .par_iter()
            .map(|path| Ok(select_model(&read_graph(path)?)?))
            .collect();
        let mut text = format!("{}\n", corpus_header());
        let mut failed = 0;
        for (path, result) in files.iter().zip(&results) {
            let name = file_name(path);
            match result {
                Ok(report) => {
                    for w in &report.warnings {
                        ctx.warn(format!("{name}: {w}"));
                    }
                }
                Err(e) => {
                    failed += 1;
                    ctx.warn(format!("{name}: {}", e.message()));
                }
            }
            text.push_str(&corpus_row(&name, result));
            text.push('\n');
        }
        emit(args.out.as_deref(), &text)?;
        if failed > 0 {
            return Err(Failure::Data(format!(
                "{failed} of {} corpus files failed",
                files.len()
            )));
        }
        return Ok(());
    }
    let input = args.input.as_ref().expect("clap requires an input");
    let report = select_model(&read_graph(input)?)?;
    for w in &report.warnings {
        ctx.warn(w);
    }
    emit(args.out.as_deref(), &to_json(&report))
}

fn fmt_divergence(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".into(), |v| v.to_string())
}

pub fn compare(args: &CompareArgs) -> Outcome {
    let align = alignment(args.align);
    let Some(dir) = &args.matrix else {
        let a = read_graph(&args.inputs[0])?;
        let b = read_graph(&args.inputs[1])?;
        return emit(args.out.as_deref(), &to_json(&nod_with(&a, &b, align)));
    };
    let files = list_files(dir)?;
    let profiles: Vec<NetworkProfile> = files
        .par_iter()
        .map(|path| Ok(NetworkProfile::new(&read_graph(path)?, align)))
        .collect::<Outcome<_>>()?;
    let n = files.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let reports: Vec<_> = pairs
        .par_iter()
        .map(|&(i, j)| compare_profiles(&profiles[i], &profiles[j]))
        .collect();
    let mut matrices = vec![vec![vec![Some(0.0); n]; n]; 4];
    for (&(i, j), r) in pairs.iter().zip(&reports) {
        for (m, value) in [Some(r.d_cm), r.d_ccm, Some(r.d_lcm), r.d_lccm]
            .into_iter()
            .enumerate()
        {
            matrices[m][i][j] = value;
            matrices[m][j][i] = value;
        }
    }
    // self-divergence of an edgeless graph is undefined for edge-based keys
    for (i, p) in profiles.iter().enumerate() {
        if p.degree_pairs.is_none() {
            matrices[1][i][i] = None;
            matrices[3][i][i] = None;
        }
    }
    let names: Vec<String> = files.iter().map(|p| file_name(p)).collect();
    let mut combined = String::new();
    for (name, matrix) in ["d_cm", "d_ccm", "d_lcm", "d_lccm"].iter().zip(&matrices) {
        let mut text = format!("\t{}\n", names.join("\t"));
        for (row_name, row) in names.iter().zip(matrix) {
            let cells: Vec<String> = row.iter().map(|&x| fmt_divergence(x)).collect();
            let _ = writeln!(text, "{row_name}\t{}", cells.join("\t"));
        }
        match &args.out {
            Some(out) => emit(Some(&out.join(format!("{name}.tsv"))), &text)?,
            None => {
                let _ = write!(combined, "# {name}\n{text}");
            }
        }
    }
    if args.out.is_none() {
        emit(None, &combined)?;
    }
    Ok(())
}

fn sample_target(args: &SampleArgs) -> Outcome<SampleTarget> {
    let need_n = || {
        args.n
            .ok_or_else(|| Failure::Usage(format!("--n is required for {:?}", args.model)))
    };
    let from = || -> Outcome<Graph> {
        let path = args.from.as_ref().ok_or_else(|| {
            Failure::Usage("--from <edge list> is required for configuration models".into())
        })?;
        read_graph(path)
    };
    Ok(match args.model {
        SampleModel::Er => SampleTarget::Er {
            nodes: need_n()?,
            edges: args
                .e
                .ok_or_else(|| Failure::Usage("--e is required for er".into()))?,
        },
        SampleModel::Ba => SampleTarget::Ba {
            nodes: need_n()?,
            m: args.m,
        },
        SampleModel::Rt => SampleTarget::Tree { nodes: need_n()? },
        SampleModel::Cm => SampleTarget::Cm(from()?.degree_histogram()),
        SampleModel::Ccm => SampleTarget::Ccm(extract_ccm(&from()?)),
        SampleModel::Lcm => {
            let g = from()?;
            SampleTarget::Lcm(extract_lcm(&g, &onion_decompose(&g)))
        }
        SampleModel::Lccm => {
            let g = from()?;
            SampleTarget::Lccm(extract_lccm(&g, &onion_decompose(&g)))
        }
    })
}

fn model_name(model: SampleModel) -> &'static str {
    match model {
        SampleModel::Er => "er",
        SampleModel::Ba => "ba",
        SampleModel::Rt => "rt",
        SampleModel::Cm => "cm",
        SampleModel::Ccm => "ccm",
        SampleModel::Lcm => "lcm",
        SampleModel::Lccm => "lccm",
    }
}

pub fn sample(args: &SampleArgs) -> Outcome {
    if args.count == 0 {
        return Err(Failure::Usage("--count must be at least 1".into()));
    }
    if args.max_attempts == 0 {
        return Err(Failure::Usage("--max-attempts must be at least 1".into()));
    }
    let seed = resolve_seed(args.seed);
    let request = SampleRequest {
        max_attempts: args.max_attempts,
        ..SampleRequest::new(sample_target(args)?, seed)
    };
    let graphs: Vec<(u64, Graph)> = (0..args.count as u64)
        .into_par_iter()
        .map(|i| {
            let replicate = request.replicate(i);
            Ok((replicate.seed, replicate.sample()?))
        })
        .collect::<Outcome<_>>()?;
    let name = model_name(args.model);
    let mut combined = String::new();
    for (i, (seed, g)) in graphs.iter().enumerate() {
        let text = format!(
            "# model={name} seed={seed} nodes={} edges={}\n{}",
            g.node_count(),
            g.edge_count(),
            g.to_edge_list()
        );
        match &args.out {
            Some(dir) => emit(Some(&dir.join(format!("{name}_{i:04}.edges"))), &text)?,
            None => combined.push_str(&text),
        }
    }
    if args.out.is_none() {
        emit(None, &combined)?;
    }
    Ok(())
}

pub const SUMMARY_HEADER: &str = "ensemble\tsamples\texhausted\tmean_clustering\tvar_clustering\tse_clustering\tmean_shortest_path\tvar_mean_shortest_path\tse_mean_shortest_path";

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        f64::NAN
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

pub fn dispersal(args: &DispersalArgs, ctx: &Context) -> Outcome {
    let ensembles = args
        .ensembles
        .iter()
        .map(|s| s.trim().parse::<Ensemble>())
        .collect::<Result<Vec<_>, _>>()?;
    if args.samples == 0 || ensembles.is_empty() {
        return Err(Failure::Usage("need at least one sample and one ensemble".into()));
    }
    let seed = resolve_seed(args.seed);
    let config = DispersalConfig {
        nodes: args.nodes,
        edges: args.edges,
        samples: args.samples,
        seed,
        ensembles: ensembles.clone(),
        max_attempts: args.max_attempts,
    };
    let run = run_dispersal(&config)?;
    for &(e, n) in &run.exhausted {
        if n > 0 {
            ctx.warn(format!("{e}: {n} replicate(s) exhausted {} attempts", args.max_attempts));
        }
    }
    let mut text = format!(
        "# seed={seed} anchor_nodes={} anchor_edges={} anchor_clustering={} anchor_mean_shortest_path={}\n",
        run.anchor.node_count(),
        run.anchor.edge_count(),
        run.anchor_clustering,
        run.anchor_mean_path
    );
    if args.summary {
        text.push_str(SUMMARY_HEADER);
        text.push('\n');
        for (&e, &(_, exhausted)) in ensembles.iter().zip(&run.exhausted) {
            let (c, l) = run.values(e);
            let vc = VarianceEstimate::new(&c, args.bootstrap, seed);
            let vl = VarianceEstimate::new(&l, args.bootstrap, seed.wrapping_add(1));
            let _ = writeln!(
                text,
                "{e}\t{}\t{exhausted}\t{}\t{}\t{}\t{}\t{}\t{}",
                c.len(),
                mean(&c),
                vc.variance,
                vc.std_error,
                mean(&l),
                vl.variance,
                vl.std_error
            );
        }
    } else {
        text.push_str(&run.to_tsv());
    }
    emit(args.out.as_deref(), &text)
}

pub fn divergence_grid(args: &GridArgs) -> Outcome {
    let families = args
        .models
        .iter()
        .map(|s| s.trim().parse::<Family>())
        .collect::<Result<Vec<_>, _>>()?;
    if families.is_empty() {
        return Err(Failure::Usage("need at least one model".into()));
    }
    let seed = resolve_seed(args.seed);
    let config = GridConfig {
        nodes: args.nodes,
        pairs: args.pairs,
        seed,
        families,
        alignment: alignment(args.align),
    };
    let rows = run_divergence_grid(&config)?;
    let text = format!(
        "# seed={seed} nodes={} pairs={}\n{}",
        args.nodes,
        args.pairs,
        grid_to_tsv(&rows)
    );
    emit(args.out.as_deref(), &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_rows_have_header_width() {
        let width = corpus_header().split('\t').count();
        let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let ok = corpus_row("p3", &Ok(select_model(&g).unwrap()));
        assert_eq!(ok.split('\t').count(), width);
        let bad = corpus_row("bad", &Err(Failure::Data("line 1: oops".into())));
        assert_eq!(bad.split('\t').count(), width);
        assert!(bad.ends_with("line 1: oops"));
    }

    #[test]
    fn error_kinds_map_to_exit_codes() {
        assert_eq!(Failure::from(Error::AttemptsExhausted { attempts: 3 }).exit_code(), 3);
        assert_eq!(Failure::from(Error::InvalidParameter("x".into())).exit_code(), 1);
        assert_eq!(Failure::from(Error::EmptyInput).exit_code(), 2);
    }
}
