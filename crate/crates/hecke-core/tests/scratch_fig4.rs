use hecke_core::algebra::make_field;
use hecke_core::hecke::{build_graph, Level, OperatorDesc, PlaceSpec};

#[test]
#[ignore]
fn dump_fig4() {
    for q in [2u64, 3] {
        let f = make_field(q, 1).unwrap();
        let desc = OperatorDesc::new(f, Level::Unramified, PlaceSpec::DegreeD(6)).unwrap();
        let g = build_graph(&desc, 8).unwrap();
        println!("=== unramified q={q} d=6 ===");
        for (i, v) in g.vertices.iter().enumerate() {
            if g.is_frontier(i) { continue; }
            let outs: Vec<String> = g.out_edges(i).iter()
                .map(|e| format!("{}:{}", g.vertices[e.dst].format(&desc.field), e.mult))
                .collect();
            println!("  {} -> {}", v.format(&desc.field), outs.join(", "));
        }
    }
}
