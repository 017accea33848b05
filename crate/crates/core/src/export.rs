//! Text renderings: DOT and JSON graphs, mesh SVG, trace and bound tables.
//!
//! All output is deterministic: vertices and edges appear in lexicographic
//! order and JSON objects have sorted keys.

use std::fmt::Write;

use serde_json::{json, Value};

use crate::bounds::BoundRow;
use crate::error::Result;
use crate::mesh::{geometry, total_crossings, MeshSpec, Side};
use crate::perm_graph::{CoreSubgraph, LabeledGraph};
use crate::recursion::GenerationState;

pub fn graph_dot(g: &LabeledGraph, core: Option<&CoreSubgraph>) -> String {
    let mut out = String::new();
    let name = if core.is_some() { "Bprime" } else { "B" };
    writeln!(out, "graph {name}{} {{", g.n()).unwrap();
    for v in 0..g.vertex_count() {
        let attr = match core {
            Some(c) if c.is_core(v) => " [core=true]",
            Some(_) => " [core=false]",
            None => "",
        };
        writeln!(out, "  \"{}\"{attr};", g.label(v)).unwrap();
    }
    for (u, v) in g.edges() {
        writeln!(out, "  \"{}\" -- \"{}\";", g.label(u), g.label(v)).unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn graph_json(g: &LabeledGraph, core: Option<&CoreSubgraph>) -> Value {
    let vertices: Vec<Value> = (0..g.vertex_count())
        .map(|v| {
            let mut obj = json!({ "label": g.label(v).to_string(), "rank": g.ranks()[v] });
            if let Some(c) = core {
                obj["core"] = json!(c.is_core(v));
            }
            obj
        })
        .collect();
    let edges: Vec<Value> = g
        .edges()
        .into_iter()
        .map(|(u, v)| json!([g.label(u).to_string(), g.label(v).to_string()]))
        .collect();
    let mut doc = json!({
        "n": g.n(),
        "vertex_count": g.vertex_count(),
        "edge_count": g.edge_count(),
        "vertices": vertices,
        "edges": edges,
    });
    if let Some(c) = core {
        doc["core_count"] = json!(c.core_count());
    }
    doc
}

pub fn mesh_json(spec: &MeshSpec) -> Value {
    json!({
        "n": spec.n(),
        "a": spec.a(),
        "P": spec.lost(),
        "crossings": total_crossings(spec).0,
    })
}

/// Ray picture of a mesh: the vertical anchor axis, each family drawn to
/// parameter `t = n`, and a dot at every crossing.
pub fn mesh_svg(spec: &MeshSpec) -> Result<String> {
    let fams = geometry::families(spec);
    let crossings = geometry::crossings(&fams);
    let n = spec.n() as f64;
    let max_slope = fams.len() as f64;
    let (unit_x, unit_y) = (40.0, 12.0);
    let half_w = n * unit_x + 40.0;
    let height = (n + n * max_slope) * unit_y + 60.0;
    let tx = |x: f64| half_w + x * unit_x;
    let ty = |y: f64| height - 30.0 - y * unit_y;
    let f = |r: num_rational::Ratio<i64>| *r.numer() as f64 / *r.denom() as f64;

    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" viewBox=\"0 0 {:.0} {:.0}\">",
        2.0 * half_w,
        height,
        2.0 * half_w,
        height
    )
    .unwrap();
    writeln!(
        out,
        "  <line x1=\"{0:.1}\" y1=\"{1:.1}\" x2=\"{0:.1}\" y2=\"{2:.1}\" stroke=\"black\" stroke-width=\"2\"/>",
        tx(0.0),
        ty(0.0),
        ty(n + 1.0)
    )
    .unwrap();
    for j in 1..=spec.n() {
        writeln!(
            out,
            "  <circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"4\" fill=\"black\"/><text x=\"{:.1}\" y=\"{:.1}\" font-size=\"10\">{j}</text>",
            tx(0.0),
            ty(j as f64),
            tx(0.0) + 6.0,
            ty(j as f64) + 12.0
        )
        .unwrap();
    }
    for fam in &fams {
        let color = match fam.side {
            Side::Left => "steelblue",
            Side::Right => "darkorange",
        };
        for ray in &fam.rays {
            let (x, y) = ray.at(num_rational::Ratio::from_integer(spec.n() as i64));
            writeln!(
                out,
                "  <line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"{color}\" stroke-width=\"1\" data-family=\"{}\" data-lost=\"{}\"/>",
                tx(0.0),
                ty(ray.anchor as f64),
                tx(f(x)),
                ty(f(y)),
                fam.index,
                fam.lost
            )
            .unwrap();
        }
    }
    for c in &crossings {
        writeln!(
            out,
            "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2\" fill=\"red\"/>",
            tx(f(c.point.0)),
            ty(f(c.point.1))
        )
        .unwrap();
    }
    writeln!(
        out,
        "  <text x=\"10\" y=\"20\" font-size=\"14\">n={} a={} P=({}) crossings={}</text>",
        spec.n(),
        spec.a(),
        spec.lost()
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(","),
        crossings.len()
    )
    .unwrap();
    out.push_str("</svg>\n");
    Ok(out)
}

fn write_csv<R: serde::Serialize>(rows: impl IntoIterator<Item = R>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).expect("in-memory csv write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
}

#[derive(serde::Serialize)]
struct TraceRow {
    n: usize,
    l: u32,
    r: u32,
    multiplicity: u64,
}

pub fn trace_csv(generations: &[GenerationState]) -> String {
    write_csv(generations.iter().flat_map(|g| {
        g.states().iter().map(|(s, &multiplicity)| TraceRow {
            n: g.n(),
            l: s.l,
            r: s.r,
            multiplicity,
        })
    }))
}

pub fn trace_json(generations: &[GenerationState]) -> Value {
    serde_json::to_value(generations).expect("generation states serialise")
}

const RATIO_DIGITS: u32 = 12;

#[derive(serde::Serialize)]
struct BoundCsvRow {
    n: usize,
    bound: String,
    ratio_to_factorial_squared_approx: String,
}

pub fn bounds_csv(rows: &[BoundRow]) -> String {
    write_csv(rows.iter().map(|row| BoundCsvRow {
        n: row.n,
        bound: row.bound().to_string(),
        ratio_to_factorial_squared_approx: row.ratio_decimal(RATIO_DIGITS),
    }))
}

pub fn bounds_json(rows: &[BoundRow]) -> Value {
    let rows: Vec<Value> = rows
        .iter()
        .map(|row| {
            json!({
                "n": row.n,
                "bound": row.bound().to_string(),
                "recurrence": row.nu_recurrence.to_string(),
                "closed_sum": row.nu_closed_sum.to_string(),
                "bracket": row.nu_bracket.to_string(),
                "ratio_approx": row.ratio_decimal(RATIO_DIGITS),
            })
        })
        .collect();
    json!({ "rows": rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::bound_table;
    use crate::perm_graph::{build_bn, build_bprime};
    use crate::recursion::seed_d6;

    #[test]
    fn dot_lists_every_vertex_and_edge() {
        let g = build_bn(3).unwrap();
        let dot = graph_dot(&g, None);
        assert!(dot.starts_with("graph B3 {"));
        assert_eq!(dot.matches(" -- ").count(), 6);
        assert!(dot.contains("\"123\" -- \"132\";") || dot.contains("\"123\" -- \"213\";"));
        assert_eq!(dot, graph_dot(&g, None));
    }

    #[test]
    fn json_marks_core_vertices() {
        let bp = build_bprime(4).unwrap();
        let doc = graph_json(&bp.graph, Some(&bp));
        assert_eq!(doc["core_count"], 4);
        let marked = doc["vertices"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|v| v["core"] == true)
            .count();
        assert_eq!(marked, 4);
        let text = serde_json::to_string(&doc).unwrap();
        let keys: Vec<usize> = ["\"core_count\"", "\"edge_count\"", "\"edges\"", "\"n\""]
            .iter()
            .map(|k| text.find(k).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn svg_has_one_marker_per_crossing() {
        let spec = MeshSpec::new(6, 1, vec![2, 4, 5, 3]).unwrap();
        let svg = mesh_svg(&spec).unwrap();
        assert_eq!(svg.matches("fill=\"red\"").count(), 30);
        assert_eq!(svg.matches("data-family").count(), 4 * 5);
        assert!(svg.contains("crossings=30"));
    }

    #[test]
    fn trace_and_bounds_tables() {
        let csv = trace_csv(&[seed_d6()]);
        assert_eq!(csv, "n,l,r,multiplicity\n6,2,3,60\n6,3,2,60\n");
        let rows = bound_table(8).unwrap();
        let csv = bounds_csv(&rows);
        assert!(csv.contains("\n7,237456,0.458055555556\n"));
        let doc = bounds_json(&rows);
        assert_eq!(doc["rows"][1]["bound"], "12402864");
        assert_eq!(
            mesh_json(&MeshSpec::new(6, 2, vec![2, 4, 5, 3]).unwrap())["crossings"],
            21
        );
    }
}
