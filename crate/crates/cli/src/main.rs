//! Command-line front end.
//!
//! Every run emits a single JSON document (stdout, or `--output`) holding a
//! manifest (command, canonical input digest, parameters, written paths),
//! the result, and checker verdicts. Identical inputs and flags produce
//! byte-identical documents; wall-clock timing goes to stderr.
//!
//! Exit codes: 0 success, 2 precondition failure, 3 parse failure,
//! 4 budget refusal.

mod error;
mod formats;

use clap::{Args, Parser, Subcommand, ValueEnum};
use error::CliError;
use formats::{
    digest, parse_combined, parse_edge_list, parse_gadget, parse_injection_table, parse_order,
    parse_partition, parse_point_set, read_file, render_combined, render_gadget, write_file,
};
use koenig::chromatic::{
    decompose_matchings, decompose_transversals, greedy_edge_color, koenig_edge_color,
    vizing_edge_color, EdgeOrder,
};
use koenig::compactness::{
    find_dead_node, find_prefix_path, level_count, LazyGraph, DEFAULT_NODE_BUDGET,
};
use koenig::gadgets::{
    build_basic, build_staircase, build_two_regular, combine, extract_separator, verify_forcing,
    CapEvent, ForcingReport, GadgetInstance, GadgetVariant, InjectionPair, PointLabel,
    DEFAULT_POINT_BUDGET,
};
use koenig::graph::{EdgeColoring, FiniteMultigraph};
use koenig::matrix::{MatchingPartition, TransversalPartition};
use koenig::{check_proper, Properness};
use serde::Serialize;
use serde_json::{json, Map, Value};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "koenig", version, about = "Edge colorings, transversal decompositions, prefix-coloring trees, and separating-set gadgets")]
struct Cli {
    /// Write the JSON run document here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Color the edges of a graph.
    Color {
        #[command(subcommand)]
        algorithm: ColorCommand,
    },
    /// Split a graph into matchings or a point set into transversals.
    Decompose {
        #[command(subcommand)]
        kind: DecomposeCommand,
    },
    /// Build, verify, combine, and read separators off gadgets.
    Gadget {
        #[command(subcommand)]
        action: GadgetCommand,
    },
    /// Explore the tree of proper prefix colorings of an edge stream.
    Tree {
        #[command(subcommand)]
        query: TreeCommand,
    },
}

#[derive(Subcommand)]
enum ColorCommand {
    /// First-fit along an edge order; at most 2n−1 colors.
    Greedy(ColorArgs),
    /// Exactly Δ colors on bipartite graphs.
    Koenig(ColorArgs),
    /// Δ+1 colors on simple graphs.
    Vizing(ColorArgs),
}

#[derive(Args)]
struct ColorArgs {
    /// Edge-list file (see README for the format).
    input: PathBuf,

    /// Degree bound n for the greedy palette 2n−1 (default: Δ).
    #[arg(short = 'n', long = "degree-bound")]
    degree_bound: Option<usize>,

    /// Edge-order file for the greedy pass (default: input line order).
    #[arg(long)]
    order: Option<PathBuf>,
}

#[derive(Subcommand)]
enum DecomposeCommand {
    /// n-regular bipartite graph into n complete matchings.
    Matchings {
        /// Edge-list file.
        input: PathBuf,
    },
    /// Point set into at most n partial transversals.
    Transversals {
        /// Point-set file.
        input: PathBuf,
        /// Row/column occupancy bound n.
        #[arg(short = 'n', long = "bound")]
        bound: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Basic,
    Staircase,
    TwoRegular,
}

#[derive(Subcommand)]
enum GadgetCommand {
    /// Construct a gadget instance for one watched value.
    Build {
        /// Which construction to run.
        #[arg(long, value_enum)]
        variant: VariantArg,
        /// The watched value k.
        #[arg(long)]
        k: u64,
        /// f table: comma-separated value:stage pairs.
        #[arg(long = "f-table", default_value = "")]
        f_table: String,
        /// g table: comma-separated value:stage pairs.
        #[arg(long = "g-table", default_value = "")]
        g_table: String,
        /// Stages to simulate (basic and staircase).
        #[arg(long)]
        stages: Option<u64>,
        /// Truncation window (two-regular).
        #[arg(long)]
        window: Option<u64>,
        /// Write the gadget file here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write a per-stage CSV here.
        #[arg(long = "emit-plot")]
        emit_plot: Option<PathBuf>,
    },
    /// Brute-force the forcing claim of a gadget file.
    Verify {
        input: PathBuf,
        /// Point budget for the partition oracle.
        #[arg(long, default_value_t = DEFAULT_POINT_BUDGET)]
        budget: usize,
    },
    /// Embed gadget files into disjoint prime blocks.
    Combine {
        /// Gadget files, one per watched value.
        inputs: Vec<PathBuf>,
        /// Write the combined file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Read the separating set off a partition of a combined file.
    Separate {
        /// Combined file from `gadget combine`.
        input: PathBuf,
        /// Partition file: one `row col block` line per point.
        #[arg(long)]
        partition: PathBuf,
    },
}

#[derive(Subcommand)]
enum TreeCommand {
    /// Node counts per level, 0 through --depth.
    Levels(TreeArgs),
    /// Leftmost node at --depth, if any.
    Path(TreeArgs),
    /// First unextendable proper prefix, if any.
    Deadnode(TreeArgs),
}

#[derive(Args)]
struct TreeArgs {
    /// Edge-list file; line order is the stream order.
    input: PathBuf,

    /// Palette size n (the stream's degree bound).
    #[arg(short = 'n', long = "colors")]
    colors: usize,

    /// Search depth (default: the stream length).
    #[arg(long)]
    depth: Option<usize>,

    /// Node budget for the search.
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: usize,

    /// Write a per-level CSV here (levels only).
    #[arg(long = "emit-plot")]
    emit_plot: Option<PathBuf>,
}

#[derive(Serialize)]
struct Manifest {
    command: String,
    input_digest: String,
    parameters: Map<String, Value>,
    outputs: Vec<String>,
}

#[derive(Serialize)]
struct RunDocument {
    manifest: Manifest,
    result: Value,
    checks: Map<String, Value>,
}

/// A finished run: the document, artifact files to write, and the exit code.
struct Run {
    document: RunDocument,
    artifacts: Vec<(PathBuf, String)>,
    exit: u8,
}

impl Run {
    fn ok(document: RunDocument, artifacts: Vec<(PathBuf, String)>) -> Self {
        Run {
            document,
            artifacts,
            exit: 0,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let output = cli.output.clone();
    match dispatch(cli) {
        Ok(run) => {
            for (path, contents) in &run.artifacts {
                if let Err(e) = write_file(path, contents) {
                    eprintln!("error: {e}");
                    return ExitCode::from(e.exit_code() as u8);
                }
            }
            let mut doc = serde_json::to_string_pretty(&run.document).expect("serializable");
            doc.push('\n');
            let emitted = match &output {
                Some(path) => write_file(path, &doc),
                None => {
                    print!("{doc}");
                    Ok(())
                }
            };
            eprintln!("elapsed_ms={}", started.elapsed().as_millis());
            match emitted {
                Ok(()) => ExitCode::from(run.exit),
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<Run, CliError> {
    let doc_path = cli.output.as_deref().map(display_path);
    match cli.command {
        Command::Color { algorithm } => cmd_color(algorithm, doc_path),
        Command::Decompose { kind } => cmd_decompose(kind, doc_path),
        Command::Gadget { action } => cmd_gadget(action, doc_path),
        Command::Tree { query } => cmd_tree(query, doc_path),
    }
}

fn display_path(p: &std::path::Path) -> String {
    p.display().to_string()
}

fn outputs_with_doc(doc_path: Option<String>, artifacts: &[(PathBuf, String)]) -> Vec<String> {
    let mut outputs: Vec<String> = artifacts.iter().map(|(p, _)| p.display().to_string()).collect();
    outputs.extend(doc_path);
    outputs
}

fn assert_proper(g: &FiniteMultigraph, c: &EdgeColoring) -> Result<(), CliError> {
    match check_proper(g, c).map_err(|e| CliError::Precondition(e.to_string()))? {
        Properness::Proper => Ok(()),
        Properness::Conflict {
            first,
            second,
            vertex,
            color,
        } => Err(CliError::Precondition(format!(
            "checker rejected the coloring: edges {first} and {second} share vertex {vertex} with color {color}"
        ))),
    }
}

fn cmd_color(algorithm: ColorCommand, doc_path: Option<String>) -> Result<Run, CliError> {
    let (name, args) = match &algorithm {
        ColorCommand::Greedy(a) => ("greedy", a),
        ColorCommand::Koenig(a) => ("koenig", a),
        ColorCommand::Vizing(a) => ("vizing", a),
    };
    let text = read_file(&args.input)?;
    let parsed = parse_edge_list(&args.input, &text)?;
    let graph = parsed.graph;
    let mut digest_material = parsed.canonical.clone();

    let mut effective_bound = args.degree_bound;
    let coloring = match name {
        "greedy" => {
            let bound = args.degree_bound.unwrap_or_else(|| graph.max_degree().max(1));
            effective_bound = Some(bound);
            let order = match &args.order {
                Some(path) => {
                    let order_text = read_file(path)?;
                    let ids = parse_order(path, &order_text)?;
                    digest_material.push_str("order\n");
                    for id in &ids {
                        digest_material.push_str(&format!("{id}\n"));
                    }
                    EdgeOrder::new(ids, graph.edge_count())
                        .map_err(|e| CliError::Precondition(e.to_string()))?
                }
                None => EdgeOrder::identity(graph.edge_count()),
            };
            greedy_edge_color(&graph, &order, bound)?
        }
        "koenig" => koenig_edge_color(&graph)?,
        _ => vizing_edge_color(&graph)?,
    };
    assert_proper(&graph, &coloring)?;

    let mut parameters = Map::new();
    parameters.insert("algorithm".into(), json!(name));
    parameters.insert("n".into(), json!(effective_bound));
    parameters.insert(
        "order".into(),
        json!(args.order.as_deref().map(display_path)),
    );

    let document = RunDocument {
        manifest: Manifest {
            command: format!("color {name}"),
            input_digest: digest(&digest_material),
            parameters,
            outputs: outputs_with_doc(doc_path, &[]),
        },
        result: json!({
            "palette_size": coloring.palette_size(),
            "colors_used": coloring.colors_used(),
            "assignment": coloring.assignment(),
        }),
        checks: [("proper".to_string(), json!(true))].into_iter().collect(),
    };
    Ok(Run::ok(document, Vec::new()))
}

/// Blocks reordered so the one holding the least element comes first.
fn canonical_matching_blocks(partition: &MatchingPartition) -> Vec<Vec<usize>> {
    let mut blocks: Vec<Vec<usize>> = partition
        .blocks
        .iter()
        .map(|b| b.iter().copied().collect())
        .collect();
    blocks.sort_by_key(|b| b.first().copied());
    blocks
}

fn canonical_transversal_blocks(partition: &TransversalPartition) -> Vec<Vec<(u64, u64)>> {
    let mut blocks: Vec<Vec<(u64, u64)>> = partition
        .blocks
        .iter()
        .map(|b| b.iter().map(|p| (p.row, p.col)).collect())
        .collect();
    blocks.sort_by_key(|b: &Vec<(u64, u64)>| b.first().copied());
    blocks
}

fn cmd_decompose(kind: DecomposeCommand, doc_path: Option<String>) -> Result<Run, CliError> {
    match kind {
        DecomposeCommand::Matchings { input } => {
            let text = read_file(&input)?;
            let parsed = parse_edge_list(&input, &text)?;
            let partition = decompose_matchings(&parsed.graph)?;
            partition
                .validate(&parsed.graph, true)
                .map_err(|e| CliError::Precondition(e.to_string()))?;
            let blocks = canonical_matching_blocks(&partition);
            let document = RunDocument {
                manifest: Manifest {
                    command: "decompose matchings".into(),
                    input_digest: digest(&parsed.canonical),
                    parameters: Map::new(),
                    outputs: outputs_with_doc(doc_path, &[]),
                },
                result: json!({
                    "kind": "matchings",
                    "block_count": blocks.len(),
                    "blocks": blocks,
                }),
                checks: [
                    ("valid_partition".to_string(), json!(true)),
                    ("complete".to_string(), json!(true)),
                ]
                .into_iter()
                .collect(),
            };
            Ok(Run::ok(document, Vec::new()))
        }
        DecomposeCommand::Transversals { input, bound } => {
            let text = read_file(&input)?;
            let parsed = parse_point_set(&input, &text)?;
            let partition = decompose_transversals(&parsed.points, bound)?;
            partition
                .validate(&parsed.points)
                .map_err(|e| CliError::Precondition(e.to_string()))?;
            let blocks = canonical_transversal_blocks(&partition);
            let mut parameters = Map::new();
            parameters.insert("n".into(), json!(bound));
            let document = RunDocument {
                manifest: Manifest {
                    command: "decompose transversals".into(),
                    input_digest: digest(&parsed.canonical),
                    parameters,
                    outputs: outputs_with_doc(doc_path, &[]),
                },
                result: json!({
                    "kind": "transversals",
                    "block_count": blocks.len(),
                    "blocks": blocks,
                }),
                checks: [("valid_partition".to_string(), json!(true))]
                    .into_iter()
                    .collect(),
            };
            Ok(Run::ok(document, Vec::new()))
        }
    }
}

fn cap_json(cap: CapEvent) -> Value {
    match cap {
        CapEvent::Uncapped => json!({ "kind": "none" }),
        CapEvent::FCapped(q) => json!({ "kind": "f", "stage": q }),
        CapEvent::GCapped(q) => json!({ "kind": "g", "stage": q }),
    }
}

fn instance_points_json(instance: &GadgetInstance) -> Value {
    let points: Vec<Value> = instance
        .points
        .iter()
        .map(|p| json!([p.row, p.col, instance.labels[p].to_string()]))
        .collect();
    Value::Array(points)
}

/// Per-stage CSV: how many points each simulated stage contributed.
fn stage_csv(instance: &GadgetInstance) -> String {
    let horizon = match instance.variant {
        GadgetVariant::TwoRegular { window } => window,
        _ => instance.stage_bound,
    };
    let mut csv = String::from("stage,points_added\n");
    for q in 0..horizon {
        let stage_indices = [2 * q as i64 + 1, 2 * q as i64 + 2];
        let count = instance
            .labels
            .values()
            .filter(|label| match label {
                PointLabel::Chain { index, .. } => stage_indices.contains(index),
                PointLabel::Base(4 | 5) => instance.cap.stage() == Some(q),
                PointLabel::Base(_) => false,
            })
            .count();
        csv.push_str(&format!("{q},{count}\n"));
    }
    csv
}

fn cmd_gadget(action: GadgetCommand, doc_path: Option<String>) -> Result<Run, CliError> {
    match action {
        GadgetCommand::Build {
            variant,
            k,
            f_table,
            g_table,
            stages,
            window,
            out,
            emit_plot,
        } => {
            let f = parse_injection_table("--f-table", &f_table)?;
            let g = parse_injection_table("--g-table", &g_table)?;
            let (instance, stage_bound) = match variant {
                VariantArg::Basic | VariantArg::Staircase => {
                    let stages = stages.ok_or_else(|| {
                        CliError::Precondition("--stages is required for this variant".into())
                    })?;
                    let pair = InjectionPair::new(f.clone(), g.clone(), stages)?;
                    let instance = match variant {
                        VariantArg::Basic => build_basic(k, &pair),
                        _ => build_staircase(k, &pair),
                    };
                    (instance, stages)
                }
                VariantArg::TwoRegular => {
                    let window = window.ok_or_else(|| {
                        CliError::Precondition("--window is required for two-regular".into())
                    })?;
                    let pair = InjectionPair::new(f.clone(), g.clone(), window)?;
                    (build_two_regular(k, &pair, window), window)
                }
            };
            if !instance.line_bound_holds() {
                return Err(CliError::Precondition(
                    "checker rejected the gadget: more than two points in a line".into(),
                ));
            }

            let rendered = render_gadget(&instance);
            let mut artifacts = Vec::new();
            if let Some(path) = &out {
                artifacts.push((path.clone(), rendered.clone()));
            }
            if let Some(path) = &emit_plot {
                artifacts.push((path.clone(), stage_csv(&instance)));
            }

            let mut parameters = Map::new();
            parameters.insert("variant".into(), json!(instance.variant.to_string()));
            parameters.insert("k".into(), json!(k));
            parameters.insert("f_table".into(), json!(f_table));
            parameters.insert("g_table".into(), json!(g_table));
            parameters.insert("stages".into(), json!(stage_bound));
            parameters.insert("window".into(), json!(window));

            let document = RunDocument {
                manifest: Manifest {
                    command: "gadget build".into(),
                    input_digest: digest(&rendered),
                    parameters,
                    outputs: outputs_with_doc(doc_path, &artifacts),
                },
                result: json!({
                    "k": instance.k,
                    "variant": instance.variant.to_string(),
                    "cap": cap_json(instance.cap),
                    "point_count": instance.points.len(),
                    "points": instance_points_json(&instance),
                    "boundary_rows": instance.boundary_rows,
                    "boundary_cols": instance.boundary_cols,
                }),
                checks: [("line_bound".to_string(), json!(true))]
                    .into_iter()
                    .collect(),
            };
            Ok(Run {
                document,
                artifacts,
                exit: 0,
            })
        }
        GadgetCommand::Verify { input, budget } => {
            let text = read_file(&input)?;
            let instance = parse_gadget(&input, &text)?;
            let report = verify_forcing(&instance, budget)?;
            let expected = ForcingReport::expected_for(instance.cap);
            let matches = report.matches_cap(instance.cap);
            let mut parameters = Map::new();
            parameters.insert("budget".into(), json!(budget));
            let document = RunDocument {
                manifest: Manifest {
                    command: "gadget verify".into(),
                    input_digest: digest(&render_gadget(&instance)),
                    parameters,
                    outputs: outputs_with_doc(doc_path, &[]),
                },
                result: json!({
                    "relation": report.relation.to_string(),
                    "expected": expected.to_string(),
                    "valid_partitions": report.valid_partitions,
                    "chain_violations": report
                        .chain_violations
                        .iter()
                        .map(|l| l.to_string())
                        .collect::<Vec<_>>(),
                    "matches_cap": matches,
                }),
                checks: [("forcing".to_string(), json!(matches))]
                    .into_iter()
                    .collect(),
            };
            Ok(Run {
                document,
                artifacts: Vec::new(),
                exit: if matches { 0 } else { 2 },
            })
        }
        GadgetCommand::Combine { inputs, out } => {
            if inputs.is_empty() {
                return Err(CliError::Precondition(
                    "at least one gadget file is required".into(),
                ));
            }
            let mut instances = Vec::new();
            let mut digest_material = String::new();
            for path in &inputs {
                let text = read_file(path)?;
                let instance = parse_gadget(path, &text)?;
                digest_material.push_str(&render_gadget(&instance));
                digest_material.push_str("--\n");
                instances.push(instance);
            }
            let combined = combine(&instances)?;
            let line_bound = combined.points.row_counts().values().all(|&c| c <= 2)
                && combined.points.col_counts().values().all(|&c| c <= 2);
            if !line_bound {
                return Err(CliError::Precondition(
                    "checker rejected the combined set: more than two points in a line".into(),
                ));
            }
            let rendered = render_combined(&combined);
            let mut artifacts = Vec::new();
            if let Some(path) = &out {
                artifacts.push((path.clone(), rendered.clone()));
            }
            let points: Vec<Value> = combined
                .points
                .iter()
                .map(|p| {
                    let (k, label) = combined.labels[p];
                    json!([p.row, p.col, k, label.to_string()])
                })
                .collect();
            let document = RunDocument {
                manifest: Manifest {
                    command: "gadget combine".into(),
                    input_digest: digest(&digest_material),
                    parameters: Map::new(),
                    outputs: outputs_with_doc(doc_path, &artifacts),
                },
                result: json!({
                    "ks": combined.window().iter().copied().collect::<Vec<_>>(),
                    "point_count": combined.points.len(),
                    "points": points,
                }),
                checks: [("line_bound".to_string(), json!(true))]
                    .into_iter()
                    .collect(),
            };
            Ok(Run {
                document,
                artifacts,
                exit: 0,
            })
        }
        GadgetCommand::Separate { input, partition } => {
            let text = read_file(&input)?;
            let combined = parse_combined(&input, &text)?;
            let partition_text = read_file(&partition)?;
            let parsed_partition = parse_partition(&partition, &partition_text)?;
            parsed_partition
                .validate(&combined.points)
                .map_err(|e| CliError::Precondition(e.to_string()))?;
            let report = extract_separator(&parsed_partition, &combined)?;
            let separates = report.separates(&combined.caps);
            let digest_material = format!(
                "{}--\n{}",
                render_combined(&combined),
                formats::render_partition(&parsed_partition)
            );
            let document = RunDocument {
                manifest: Manifest {
                    command: "gadget separate".into(),
                    input_digest: digest(&digest_material),
                    parameters: Map::new(),
                    outputs: outputs_with_doc(doc_path, &[]),
                },
                result: json!({
                    "a": report.a.iter().copied().collect::<Vec<_>>(),
                    "window": report.window.iter().copied().collect::<Vec<_>>(),
                    "separates": separates,
                }),
                checks: [
                    ("partition_valid".to_string(), json!(true)),
                    ("separator_sound".to_string(), json!(separates)),
                ]
                .into_iter()
                .collect(),
            };
            Ok(Run {
                document,
                artifacts: Vec::new(),
                exit: if separates { 0 } else { 2 },
            })
        }
    }
}

fn cmd_tree(query: TreeCommand, doc_path: Option<String>) -> Result<Run, CliError> {
    let (name, args) = match &query {
        TreeCommand::Levels(a) => ("levels", a),
        TreeCommand::Path(a) => ("path", a),
        TreeCommand::Deadnode(a) => ("deadnode", a),
    };
    let text = read_file(&args.input)?;
    let parsed = parse_edge_list(&args.input, &text)?;
    let stream = LazyGraph::new(parsed.graph.edges().to_vec(), args.colors)?;
    let depth = args.depth.unwrap_or_else(|| stream.stream_len());

    let mut parameters = Map::new();
    parameters.insert("n".into(), json!(args.colors));
    parameters.insert("depth".into(), json!(depth));
    parameters.insert("budget".into(), json!(args.budget));

    let mut artifacts: Vec<(PathBuf, String)> = Vec::new();
    let result = match name {
        "levels" => {
            let mut counts = Vec::with_capacity(depth + 1);
            for level in 0..=depth {
                counts.push(level_count(&stream, level, args.budget)?);
            }
            if let Some(path) = &args.emit_plot {
                let mut csv = String::from("level,count\n");
                for (level, count) in counts.iter().enumerate() {
                    csv.push_str(&format!("{level},{count}\n"));
                }
                artifacts.push((path.clone(), csv));
            }
            json!({ "depth": depth, "counts": counts })
        }
        "path" => {
            let path = find_prefix_path(&stream, depth, args.budget)?;
            json!({ "depth": depth, "path": path })
        }
        _ => {
            let dead = find_dead_node(&stream, args.budget)?;
            json!({ "dead_node": dead })
        }
    };

    let document = RunDocument {
        manifest: Manifest {
            command: format!("tree {name}"),
            input_digest: digest(&parsed.canonical),
            parameters,
            outputs: outputs_with_doc(doc_path, &artifacts),
        },
        result,
        checks: Map::new(),
    };
    Ok(Run {
        document,
        artifacts,
        exit: 0,
    })
}
