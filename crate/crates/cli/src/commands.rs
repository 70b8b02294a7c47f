use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use gridlab::experiment::{bipartition_sample, diag_pipeline, slice_split};
use gridlab::flip::{
    apply_flip, check_component_diameter, check_connected, check_diameter_bound, check_small_dist,
    extract_avoiding_subcube, find_cube_in_ball, flipped_cube, lambda, CubeWitness, FlipStructure, FlippedCubeOptions,
    PartLayout,
};
use gridlab::graph::{complete, cycle, edgeless, make_cube, make_diag_cube, path, Graph};
use gridlab::json::{self, EmbeddingJson, FlipJson, GraphJson, TransductionJson};
use gridlab::logic::{parse_formula, Relation};
use gridlab::report::{Report, Witness};
use gridlab::slices::{
    build_slice_decomposition, check_locality_window_with, cube_fiber_embedding, cube_layering_embedding, from_layers,
    position_layers, product_embedding, verify_condition_i, verify_condition_ii, verify_embedding, ProductEmbedding,
    SliceConstruction, SliceDecomposition,
};
use gridlab::transduce::{color_cube_mod3, diag_run, diag_transduction, TransductionRun};
use gridlab::width::{check_product_tw_bound, cliquewidth_exact_tiny, treewidth_exact};
use serde::de::DeserializeOwned;
use serde_json::json;

use crate::output::{Outcome, Sink};
use crate::{
    Cli, Command, CubeEmbedding, Experiment, Generate, Layout, Lemma, SliceArgs, TransduceArgs, Verify, WidthArgs,
    WidthKindArg,
};

pub fn run(cli: &Cli) -> Result<Outcome> {
    let config = serde_json::to_value(cli)?;
    let mut sink = Sink::open(cli.out.as_deref(), config)?;
    match &cli.command {
        Command::Generate(g) => generate(cli, g, &mut sink)?,
        Command::Verify(v) => verify(cli, v, &mut sink)?,
        Command::Experiment(e) => experiment(cli, e, &mut sink)?,
        Command::Width(w) => width(cli, w, &mut sink)?,
        Command::Transduce(t) => transduce(t, &mut sink)?,
    }
    sink.finish()
}

fn read<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    json::from_str(&text).with_context(|| format!("in {}", path.display()))
}

fn load_flip(path: &Path) -> Result<(FlipStructure, CubeWitness)> {
    let fj: FlipJson = read(path)?;
    let fs = fj.to_structure()?;
    let cube = fj
        .graph
        .to_cube()
        .context("flip structure needs the cube witness in graph.coords")?;
    Ok((fs, CubeWitness::new(cube.side, cube.coords)))
}

fn family(spec: &str) -> Result<Graph> {
    if let Some((name, size)) = spec.split_once(':') {
        let m: usize = size.parse().with_context(|| format!("bad size in {spec}"))?;
        return match name {
            "path" => Ok(path(m)),
            "cycle" if m >= 3 => Ok(cycle(m)),
            "complete" => Ok(complete(m)),
            "edgeless" => Ok(edgeless(m)),
            _ => bail!("unknown graph family {spec}"),
        };
    }
    Ok(read::<GraphJson>(Path::new(spec))?.to_graph()?)
}

fn generate(cli: &Cli, g: &Generate, sink: &mut Sink) -> Result<()> {
    match g {
        Generate::Cube { n, mod3_colors } => {
            let cube = make_cube(*n)?;
            let mut out = GraphJson::from_cube(&cube);
            if *mod3_colors {
                out.colors = color_cube_mod3(&cube).color_members();
            }
            sink.document(&out)
        }
        Generate::Diagcube { n } => sink.document(&GraphJson::from_cube(&make_diag_cube(*n)?)),
        Generate::Product { h, p, embedding_out } => {
            if *p == 0 {
                bail!("--p must be at least 1");
            }
            let (graph, emb) = product_embedding(&family(h)?, *p)?;
            if let Some(path) = embedding_out {
                let text = serde_json::to_string(&EmbeddingJson::from_embedding(&emb))?;
                fs::write(path, text + "\n").with_context(|| format!("cannot write {}", path.display()))?;
            }
            sink.document(&GraphJson::from_graph(&graph))
        }
        Generate::FlippedCube {
            n,
            k,
            layout,
            isolated,
            min_part,
        } => {
            let layout = match layout {
                Layout::Random => PartLayout::Random,
                Layout::Slabs => PartLayout::Slabs,
                Layout::Parity => PartLayout::Parity,
            };
            let mut opts = FlippedCubeOptions::new(*n, *k).layout(layout).isolated(*isolated);
            opts.min_part = *min_part;
            let inst = flipped_cube(&opts, cli.seed)?;
            sink.document(&FlipJson::from_structure(&inst.structure).with_coords(&inst.witness.coords))
        }
    }
}

fn verify(cli: &Cli, v: &Verify, sink: &mut Sink) -> Result<()> {
    match v.lemma {
        Lemma::InducedSubgrid => {
            let (fs, w) = load_flip(&v.input)?;
            let cube = find_cube_in_ball(&fs, &w, v.vertex, v.radius)?;
            let mut report = cube.verify(fs.graph())?;
            report.check = "induced-subgrid".into();
            let report = report
                .with_note("side", cube.witness.side)
                .with_note("vertices", &cube.vertices);
            sink.report(json!({"vertex": v.vertex, "radius": v.radius}), &report)
        }
        Lemma::AvoidSubcube => {
            let (fs, w) = load_flip(&v.input)?;
            let part = one_based(v.part.ok_or_else(|| anyhow!("avoid-subcube needs --part"))?, fs.k())?;
            let ex = extract_avoiding_subcube(&fs, &w, part)?;
            let mut report = match ex.original.iter().find(|&&u| fs.part(u) == part) {
                Some(&u) => Report::fail("avoid-subcube", Witness::Vertex { v: u }),
                None => ex.witness.verify(&apply_flip(&ex.structure)),
            };
            report.check = "avoid-subcube".into();
            let report = report.with_note("block", ex.block).with_note("side", ex.witness.side);
            sink.report(json!({"part": part + 1}), &report)
        }
        Lemma::SmallDist => {
            let (fs, w) = load_flip(&v.input)?;
            let pairs = match &v.parts {
                Some(p) => vec![(one_based(p[0], fs.k())?, one_based(p[1], fs.k())?)],
                None => (0..fs.k())
                    .flat_map(|i| (i..fs.k()).map(move |j| (i, j)))
                    .filter(|&(i, j)| fs.flips(i, j))
                    .collect(),
            };
            for (i, j) in pairs {
                let report = check_small_dist(&fs, &w, i, j)?.with_note("parts", [i + 1, j + 1]);
                sink.report(json!({"parts": [i + 1, j + 1]}), &report)?;
            }
            Ok(())
        }
        Lemma::Connected => {
            let (fs, w) = load_flip(&v.input)?;
            sink.report(json!({"n": fs.n()}), &check_connected(&fs, &w)?)
        }
        Lemma::ComponentDiameter => {
            let (fs, w) = load_flip(&v.input)?;
            sink.report(json!({"n": fs.n()}), &check_component_diameter(&fs, &w)?)
        }
        Lemma::DiameterBound => {
            let (fs, w) = load_flip(&v.input)?;
            let alpha = v.alpha.unwrap_or_else(|| lambda(&fs).unwrap_or(0));
            let k = v.k.unwrap_or(fs.k());
            let report = check_diameter_bound(&fs, &w, alpha, k)?.with_note("alpha", alpha);
            sink.report(json!({"alpha": alpha, "k": k}), &report)
        }
        Lemma::LocalityWindow => {
            let gj: GraphJson = read(&v.input)?;
            let cg = gj.to_colored()?;
            let text = v
                .formula
                .as_deref()
                .ok_or_else(|| anyhow!("locality-window needs --formula"))?;
            let rho = parse_formula(text)?;
            let sc = construction(&gj, &cg.graph, &v.slices)?;
            let whole = Relation::compute(&cg, &rho)?;
            let len = sc.decomposition.len();
            let lengths: Vec<usize> = match v.k {
                Some(k) => vec![k],
                None => (1..=len).collect(),
            };
            for k in lengths {
                for i in 1..=(len + 1).saturating_sub(k) {
                    let (s, sp) = sc.window_pair(&cg.graph, i, k)?;
                    let report = check_locality_window_with(&whole, &cg, &rho, &s, &sp)?;
                    sink.report(json!({"window": [i, k]}), &report)?;
                }
            }
            Ok(())
        }
        Lemma::ConditionI => {
            let gj: GraphJson = read(&v.input)?;
            let g = gj.to_graph()?;
            let (sd, valid) = decomposition(&gj, &g, &v.slices)?;
            let report = verify_condition_i(&g, &sd)?
                .with_note("slices", sd.len())
                .with_note("embedding_valid", valid);
            sink.report(json!({"n": g.n(), "d": v.slices.d}), &report)
        }
        Lemma::ConditionIi => {
            let gj: GraphJson = read(&v.input)?;
            let g = gj.to_graph()?;
            let (sd, valid) = decomposition(&gj, &g, &v.slices)?;
            let k = v.k.unwrap_or(1);
            for (i, report) in verify_condition_ii(&g, &sd, k, cli.budget)?.into_iter().enumerate() {
                let report = report.with_note("embedding_valid", valid);
                sink.report(json!({"window": [i + 1, k]}), &report)?;
            }
            Ok(())
        }
        Lemma::TwProduct => {
            let g = read::<GraphJson>(&v.input)?.to_graph()?;
            let k = v.k.ok_or_else(|| anyhow!("tw-product needs --k"))?;
            if k == 0 {
                bail!("--k must be at least 1");
            }
            sink.report(json!({"n": g.n(), "k": k}), &check_product_tw_bound(&g, k, cli.budget))
        }
    }
}

fn one_based(p: usize, k: usize) -> Result<usize> {
    if p == 0 || p > k {
        bail!("part {p} outside 1..={k}");
    }
    Ok(p - 1)
}

fn embedding(gj: &GraphJson, args: &SliceArgs) -> Result<ProductEmbedding> {
    Ok(match (&args.embedding, args.cube_embedding) {
        (Some(path), None) => read::<EmbeddingJson>(path)?.to_embedding()?,
        (None, Some(kind)) => {
            let cube = gj
                .to_cube()
                .context("--cube-embedding needs coordinates in the input graph")?;
            match kind {
                CubeEmbedding::Fiber if (1..=3).contains(&args.axis) => cube_fiber_embedding(&cube, args.axis),
                CubeEmbedding::Fiber => bail!("--axis must be 1, 2 or 3"),
                CubeEmbedding::Layering => cube_layering_embedding(&cube),
            }
        }
        (Some(_), Some(_)) => bail!("give either --embedding or --cube-embedding"),
        (None, None) => bail!("this check needs --embedding or --cube-embedding"),
    })
}

fn construction(gj: &GraphJson, g: &Graph, args: &SliceArgs) -> Result<SliceConstruction> {
    Ok(build_slice_decomposition(g, &embedding(gj, args)?, args.d, args.r)?)
}

/// Slices from a file, or the layers of an embedding grouped `d` at a time.
/// The embedding only has to map into `[1, p]`; whether it is a valid
/// embedding of the input is returned alongside.
fn decomposition(gj: &GraphJson, g: &Graph, args: &SliceArgs) -> Result<(SliceDecomposition, Option<bool>)> {
    if let Some(path) = &args.slices {
        if args.embedding.is_some() || args.cube_embedding.is_some() {
            bail!("give either --slices or an embedding");
        }
        let sd: SliceDecomposition = read(path)?;
        sd.slice_of(g.n())?;
        return Ok((sd, None));
    }
    let emb = embedding(gj, args)?;
    if emb.map.len() != g.n() || emb.map.iter().any(|&(_, pos)| pos == 0 || pos > emb.p) {
        bail!("embedding does not map every vertex into positions 1..={}", emb.p);
    }
    let valid = verify_embedding(g, &emb).passed();
    let sc = from_layers(position_layers(&emb), args.d, args.r)?;
    Ok((sc.decomposition, Some(valid)))
}

fn experiment(cli: &Cli, e: &Experiment, sink: &mut Sink) -> Result<()> {
    match e {
        Experiment::DiagPipeline { n_min, n_max } => {
            if *n_min == 0 || n_min > n_max {
                bail!("need 1 <= --n-min <= --n-max");
            }
            for n in *n_min..=*n_max {
                sink.report(json!({"N": n}), &diag_pipeline(n)?)?;
            }
            Ok(())
        }
        Experiment::SliceSplit { n, axis, d } => {
            if !(1..=3).contains(axis) {
                bail!("--axis must be 1, 2 or 3");
            }
            let reports = slice_split(*n, *axis, *d, cli.budget)?;
            let last = reports.len() - 1;
            for (idx, report) in reports.iter().enumerate() {
                let key = if idx == last {
                    json!({"N": n, "summary": true})
                } else {
                    json!({"N": n, "slice": idx + 1})
                };
                sink.report(key, report)?;
            }
            Ok(())
        }
        Experiment::BipartitionSample { n, samples, records } => {
            let (summary, all) = bipartition_sample(*n, *samples, cli.seed, cli.budget)?;
            if *records || summary.exhaustive {
                for r in &all {
                    sink.record(
                        json!({"N": n, "index": r.index}),
                        &json!({"max_side": r.max_side(), "sample": r}),
                    )?;
                }
            }
            sink.record(json!({"N": n, "summary": true}), &summary)
        }
    }
}

fn width(cli: &Cli, w: &WidthArgs, sink: &mut Sink) -> Result<()> {
    let g = read::<GraphJson>(&w.input)?.to_graph()?;
    let result = match w.kind {
        WidthKindArg::Tw => treewidth_exact(&g, cli.budget),
        WidthKindArg::Cw => cliquewidth_exact_tiny(&g, w.max_labels, cli.budget),
    };
    result
        .verify_certificate(&g)
        .map_err(|e| anyhow!("certificate failed to re-verify: {e}"))?;
    sink.record(json!({"n": g.n(), "m": g.edge_count()}), &result)
}

fn transduce(t: &TransduceArgs, sink: &mut Sink) -> Result<()> {
    let gj: GraphJson = read(&t.input)?;
    let cg = gj.to_colored()?;
    let transduction = match &t.transduction {
        Some(path) => read::<TransductionJson>(path)?.to_transduction()?,
        None => diag_transduction(),
    };
    let run = match &t.run {
        Some(path) => read::<TransductionRun>(path)?,
        None if t.diag && gj.colors.is_empty() && gj.coords.is_some() => diag_run(&gj.to_cube()?),
        None => TransductionRun {
            coloring: cg.color_members(),
            keep: (0..cg.n()).collect(),
        },
    };
    let out = transduction.apply(&cg, &run)?;
    let mut result = GraphJson::from_graph(&out.graph);
    if let Some(coords) = &gj.coords {
        result.coords = Some(out.kept.iter().map(|&v| coords[v]).collect());
    }
    sink.document(&result)
}
