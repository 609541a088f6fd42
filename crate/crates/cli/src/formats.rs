//! Text formats: edge lists, point sets, edge orders, injection tables,
//! gadget files, combined files, and partition files.
//!
//! All formats are line-oriented. `#` starts a comment anywhere in a line;
//! blank lines are skipped. Canonical serializations back each format, and
//! input digests hash the canonical form, so formatting noise never changes
//! a manifest digest.

use crate::error::CliError;
use koenig::gadgets::{
    CapEvent, CombinedGadgets, GadgetInstance, GadgetVariant, PointLabel,
};
use koenig::graph::{FiniteMultigraph, Side, Vertex};
use koenig::matrix::{Point, PointSet, TransversalPartition};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

pub fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Lines with comments stripped, paired with their 1-based line numbers.
fn significant_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

pub fn digest(canonical: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(canonical.as_bytes());
    let mut out = String::from("sha256:");
    for byte in hasher.finalize() {
        let _ = write!(out, "{byte:02x}");
    }
    out
}

/// A parsed edge-list file: the graph plus the stream order its lines
/// define.
pub struct EdgeListFile {
    pub graph: FiniteMultigraph,
    pub canonical: String,
}

/// Parses the edge-list format: optional `bipartite L: <ids> R: <ids>`
/// header, then one `u v` edge per line; line order is the enumeration
/// order.
pub fn parse_edge_list(path: &Path, text: &str) -> Result<EdgeListFile, CliError> {
    let name = path.display().to_string();
    let mut sides: Option<BTreeMap<Vertex, Side>> = None;
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    let mut first = true;
    for (line_no, line) in significant_lines(text) {
        if first && line.starts_with("bipartite") {
            sides = Some(parse_bipartite_header(&name, line_no, line)?);
            first = false;
            continue;
        }
        first = false;
        let mut fields = line.split_whitespace();
        let (u, v) = match (fields.next(), fields.next(), fields.next()) {
            (Some(u), Some(v), None) => (u, v),
            _ => {
                return Err(CliError::parse(
                    &name,
                    line_no,
                    format!("expected `u v`, found {line:?}"),
                ))
            }
        };
        let parse_vertex = |s: &str| {
            s.parse::<Vertex>().map_err(|_| {
                CliError::parse(&name, line_no, format!("invalid vertex id {s:?}"))
            })
        };
        edges.push((parse_vertex(u)?, parse_vertex(v)?));
    }
    let graph = match &sides {
        Some(sides) => {
            let vertices: Vec<Vertex> = sides.keys().copied().collect();
            FiniteMultigraph::with_bipartition(vertices, edges, sides.clone())
        }
        None => FiniteMultigraph::from_edges(edges),
    }
    .map_err(|e| CliError::Precondition(format!("{name}: {e}")))?;

    let mut canonical = String::new();
    if let Some(sides) = &sides {
        canonical.push_str("bipartite L:");
        for (&v, &s) in sides {
            if s == Side::Left {
                let _ = write!(canonical, " {v}");
            }
        }
        canonical.push_str(" R:");
        for (&v, &s) in sides {
            if s == Side::Right {
                let _ = write!(canonical, " {v}");
            }
        }
        canonical.push('\n');
    }
    for &(u, v) in graph.edges() {
        let _ = writeln!(canonical, "{u} {v}");
    }
    Ok(EdgeListFile { graph, canonical })
}

fn parse_bipartite_header(
    name: &str,
    line_no: usize,
    line: &str,
) -> Result<BTreeMap<Vertex, Side>, CliError> {
    let rest = line.trim_start_matches("bipartite").trim();
    let (left_part, right_part) = rest
        .strip_prefix("L:")
        .and_then(|r| r.split_once("R:"))
        .ok_or_else(|| {
            CliError::parse(name, line_no, "expected `bipartite L: <ids> R: <ids>`")
        })?;
    let mut sides = BTreeMap::new();
    for (part, side) in [(left_part, Side::Left), (right_part, Side::Right)] {
        for token in part.split_whitespace() {
            let v: Vertex = token.parse().map_err(|_| {
                CliError::parse(name, line_no, format!("invalid vertex id {token:?}"))
            })?;
            if sides.insert(v, side).is_some() {
                return Err(CliError::parse(
                    name,
                    line_no,
                    format!("vertex {v} listed twice in the header"),
                ));
            }
        }
    }
    Ok(sides)
}

pub struct PointSetFile {
    pub points: PointSet,
    pub canonical: String,
}

/// Parses the point-set format: one `row col` pair per line.
pub fn parse_point_set(path: &Path, text: &str) -> Result<PointSetFile, CliError> {
    let name = path.display().to_string();
    let mut points = PointSet::new();
    for (line_no, line) in significant_lines(text) {
        let mut fields = line.split_whitespace();
        let (r, c) = match (fields.next(), fields.next(), fields.next()) {
            (Some(r), Some(c), None) => (r, c),
            _ => {
                return Err(CliError::parse(
                    &name,
                    line_no,
                    format!("expected `row col`, found {line:?}"),
                ))
            }
        };
        let parse = |s: &str| {
            s.parse::<u64>()
                .map_err(|_| CliError::parse(&name, line_no, format!("invalid coordinate {s:?}")))
        };
        points.insert(Point::new(parse(r)?, parse(c)?));
    }
    let canonical = render_point_set(&points);
    Ok(PointSetFile { points, canonical })
}

pub fn render_point_set(points: &PointSet) -> String {
    let mut out = String::new();
    for p in points.iter() {
        let _ = writeln!(out, "{} {}", p.row, p.col);
    }
    out
}

/// Parses an edge order: whitespace-separated edge ids, any line layout.
pub fn parse_order(path: &Path, text: &str) -> Result<Vec<usize>, CliError> {
    let name = path.display().to_string();
    let mut ids = Vec::new();
    for (line_no, line) in significant_lines(text) {
        for token in line.split_whitespace() {
            ids.push(token.parse::<usize>().map_err(|_| {
                CliError::parse(&name, line_no, format!("invalid edge id {token:?}"))
            })?);
        }
    }
    Ok(ids)
}

/// Parses an injection table flag: comma-separated `value:stage` pairs.
pub fn parse_injection_table(flag: &str, text: &str) -> Result<BTreeMap<u64, u64>, CliError> {
    let mut table = BTreeMap::new();
    if text.trim().is_empty() {
        return Ok(table);
    }
    for pair in text.split(',') {
        let (value, stage) = pair.trim().split_once(':').ok_or_else(|| {
            CliError::Precondition(format!("{flag}: expected `value:stage`, found {pair:?}"))
        })?;
        let value: u64 = value.trim().parse().map_err(|_| {
            CliError::Precondition(format!("{flag}: invalid value {value:?}"))
        })?;
        let stage: u64 = stage.trim().parse().map_err(|_| {
            CliError::Precondition(format!("{flag}: invalid stage {stage:?}"))
        })?;
        if table.insert(stage, value).is_some() {
            return Err(CliError::Precondition(format!(
                "{flag}: stage {stage} listed twice"
            )));
        }
    }
    Ok(table)
}

/// Canonical gadget file.
pub fn render_gadget(instance: &GadgetInstance) -> String {
    let mut out = String::new();
    out.push_str("gadget v1\n");
    let _ = writeln!(out, "k {}", instance.k);
    let _ = writeln!(out, "variant {}", instance.variant);
    let _ = writeln!(out, "stages {}", instance.stage_bound);
    if let GadgetVariant::TwoRegular { window } = instance.variant {
        let _ = writeln!(out, "window {window}");
    }
    let _ = writeln!(out, "cap {}", instance.cap);
    if matches!(instance.variant, GadgetVariant::TwoRegular { .. }) {
        out.push_str("boundary-rows");
        for r in &instance.boundary_rows {
            let _ = write!(out, " {r}");
        }
        out.push('\n');
        out.push_str("boundary-cols");
        for c in &instance.boundary_cols {
            let _ = write!(out, " {c}");
        }
        out.push('\n');
    }
    let _ = writeln!(out, "points {}", instance.points.len());
    for point in instance.points.iter() {
        let label = instance.labels[point];
        let _ = writeln!(out, "{} {} {label}", point.row, point.col);
    }
    out
}

pub fn parse_gadget(path: &Path, text: &str) -> Result<GadgetInstance, CliError> {
    let name = path.display().to_string();
    let mut lines = significant_lines(text);
    let (n, header) = lines
        .next()
        .ok_or_else(|| CliError::parse(&name, 0, "missing header"))?;
    if header != "gadget v1" {
        return Err(CliError::parse(&name, n, "expected `gadget v1`"));
    }

    let mut k: Option<u64> = None;
    let mut variant_name: Option<String> = None;
    let mut stages: Option<u64> = None;
    let mut window: Option<u64> = None;
    let mut cap: Option<CapEvent> = None;
    let mut boundary_rows = Vec::new();
    let mut boundary_cols = Vec::new();
    let mut point_count: Option<usize> = None;
    let mut labeled: Vec<(Point, PointLabel)> = Vec::new();

    for (line_no, line) in lines {
        let mut fields = line.split_whitespace();
        let key = fields.next().unwrap();
        let rest: Vec<&str> = fields.collect();
        let bad = |msg: &str| CliError::parse(&name, line_no, msg.to_string());
        match key {
            "k" => k = Some(parse_u64(&name, line_no, rest.first())?),
            "variant" => variant_name = Some(rest.join(" ")),
            "stages" => stages = Some(parse_u64(&name, line_no, rest.first())?),
            "window" => window = Some(parse_u64(&name, line_no, rest.first())?),
            "cap" => {
                cap = Some(match rest.as_slice() {
                    ["none"] => CapEvent::Uncapped,
                    ["f", q] => CapEvent::FCapped(parse_u64(&name, line_no, Some(q))?),
                    ["g", q] => CapEvent::GCapped(parse_u64(&name, line_no, Some(q))?),
                    _ => return Err(bad("expected `cap none`, `cap f <q>` or `cap g <q>`")),
                })
            }
            "boundary-rows" => {
                boundary_rows = parse_u64_list(&name, line_no, &rest)?;
            }
            "boundary-cols" => {
                boundary_cols = parse_u64_list(&name, line_no, &rest)?;
            }
            "points" => point_count = Some(parse_u64(&name, line_no, rest.first())? as usize),
            _ => {
                // point line: `row col label`
                if rest.len() != 2 {
                    return Err(bad("expected `row col label`"));
                }
                let row = key
                    .parse::<u64>()
                    .map_err(|_| bad("expected `row col label`"))?;
                let col = parse_u64(&name, line_no, Some(&rest[0]))?;
                let label: PointLabel = rest[1]
                    .parse()
                    .map_err(|e| CliError::parse(&name, line_no, format!("{e}")))?;
                labeled.push((Point::new(row, col), label));
            }
        }
    }

    let k = k.ok_or_else(|| CliError::parse(&name, 0, "missing `k`"))?;
    let stages = stages.ok_or_else(|| CliError::parse(&name, 0, "missing `stages`"))?;
    let cap = cap.ok_or_else(|| CliError::parse(&name, 0, "missing `cap`"))?;
    let variant = match variant_name.as_deref() {
        Some("basic") => GadgetVariant::Basic,
        Some("staircase") => GadgetVariant::Staircase,
        Some("two_regular") => GadgetVariant::TwoRegular {
            window: window.ok_or_else(|| CliError::parse(&name, 0, "missing `window`"))?,
        },
        other => {
            return Err(CliError::parse(
                &name,
                0,
                format!("unknown variant {other:?}"),
            ))
        }
    };
    if let Some(expected) = point_count {
        if labeled.len() != expected {
            return Err(CliError::parse(
                &name,
                0,
                format!("declared {expected} points, found {}", labeled.len()),
            ));
        }
    }
    let mut points = PointSet::new();
    let mut labels = BTreeMap::new();
    let mut seen_labels = std::collections::BTreeSet::new();
    for (point, label) in labeled {
        if !points.insert(point) {
            return Err(CliError::parse(
                &name,
                0,
                format!("duplicate point ({}, {})", point.row, point.col),
            ));
        }
        if !seen_labels.insert(label) {
            return Err(CliError::parse(&name, 0, format!("duplicate label {label}")));
        }
        labels.insert(point, label);
    }
    Ok(GadgetInstance {
        k,
        variant,
        stage_bound: stages,
        cap,
        points,
        labels,
        boundary_rows,
        boundary_cols,
    })
}

fn parse_u64(name: &str, line_no: usize, token: Option<&&str>) -> Result<u64, CliError> {
    token
        .and_then(|t| t.parse::<u64>().ok())
        .ok_or_else(|| CliError::parse(name, line_no, "expected a natural number"))
}

fn parse_u64_list(name: &str, line_no: usize, tokens: &[&str]) -> Result<Vec<u64>, CliError> {
    tokens
        .iter()
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| CliError::parse(name, line_no, format!("invalid number {t:?}")))
        })
        .collect()
}

/// Canonical combined-set file.
pub fn render_combined(combined: &CombinedGadgets) -> String {
    let mut out = String::new();
    out.push_str("combined v1\n");
    let _ = writeln!(out, "instances {}", combined.caps.len());
    for (&k, &cap) in &combined.caps {
        let _ = writeln!(out, "instance {k} {cap}");
    }
    let _ = writeln!(out, "points {}", combined.points.len());
    for point in combined.points.iter() {
        let (k, label) = combined.labels[point];
        let _ = writeln!(out, "{} {} {k} {label}", point.row, point.col);
    }
    out
}

pub fn parse_combined(path: &Path, text: &str) -> Result<CombinedGadgets, CliError> {
    let name = path.display().to_string();
    let mut lines = significant_lines(text);
    let (n, header) = lines
        .next()
        .ok_or_else(|| CliError::parse(&name, 0, "missing header"))?;
    if header != "combined v1" {
        return Err(CliError::parse(&name, n, "expected `combined v1`"));
    }
    let mut caps: BTreeMap<u64, CapEvent> = BTreeMap::new();
    let mut points = PointSet::new();
    let mut labels: BTreeMap<Point, (u64, PointLabel)> = BTreeMap::new();
    let mut declared: Option<usize> = None;
    for (line_no, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = |msg: String| CliError::parse(&name, line_no, msg);
        match fields.as_slice() {
            ["instances", _] => {}
            ["instance", k, "none"] => {
                caps.insert(parse_u64(&name, line_no, Some(k))?, CapEvent::Uncapped);
            }
            ["instance", k, "f", q] => {
                caps.insert(
                    parse_u64(&name, line_no, Some(k))?,
                    CapEvent::FCapped(parse_u64(&name, line_no, Some(q))?),
                );
            }
            ["instance", k, "g", q] => {
                caps.insert(
                    parse_u64(&name, line_no, Some(k))?,
                    CapEvent::GCapped(parse_u64(&name, line_no, Some(q))?),
                );
            }
            ["points", count] => declared = Some(parse_u64(&name, line_no, Some(count))? as usize),
            [row, col, k, label] => {
                let point = Point::new(
                    parse_u64(&name, line_no, Some(row))?,
                    parse_u64(&name, line_no, Some(col))?,
                );
                let k = parse_u64(&name, line_no, Some(k))?;
                let label: PointLabel = label
                    .parse()
                    .map_err(|e| CliError::parse(&name, line_no, format!("{e}")))?;
                points.insert(point);
                labels.insert(point, (k, label));
            }
            _ => return Err(bad(format!("unrecognized line {line:?}"))),
        }
    }
    if let Some(expected) = declared {
        if points.len() != expected {
            return Err(CliError::parse(
                &name,
                0,
                format!("declared {expected} points, found {}", points.len()),
            ));
        }
    }
    Ok(CombinedGadgets {
        points,
        labels,
        caps,
    })
}

/// Parses a partition file: one `row col block` line per point.
pub fn parse_partition(path: &Path, text: &str) -> Result<TransversalPartition, CliError> {
    let name = path.display().to_string();
    let mut assignments: Vec<(Point, usize)> = Vec::new();
    let mut block_count = 0usize;
    for (line_no, line) in significant_lines(text) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(CliError::parse(
                &name,
                line_no,
                format!("expected `row col block`, found {line:?}"),
            ));
        }
        let row = parse_u64(&name, line_no, Some(&fields[0]))?;
        let col = parse_u64(&name, line_no, Some(&fields[1]))?;
        let block = parse_u64(&name, line_no, Some(&fields[2]))? as usize;
        block_count = block_count.max(block + 1);
        assignments.push((Point::new(row, col), block));
    }
    let mut blocks = vec![PointSet::new(); block_count.max(1)];
    for (point, block) in assignments {
        blocks[block].insert(point);
    }
    Ok(TransversalPartition { blocks })
}

pub fn render_partition(partition: &TransversalPartition) -> String {
    let mut rows: Vec<(Point, usize)> = partition
        .blocks
        .iter()
        .enumerate()
        .flat_map(|(b, block)| block.iter().map(move |&p| (p, b)))
        .collect();
    rows.sort_unstable();
    let mut out = String::new();
    for (p, b) in rows {
        let _ = writeln!(out, "{} {} {b}", p.row, p.col);
    }
    out
}
