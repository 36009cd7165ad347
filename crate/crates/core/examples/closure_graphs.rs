// Build the closure graphs, validate them and export DOT.

use congrua::closuregraph::{bundle_graph, class_graph, export, validate, ExportFormat};

pub fn run_example() -> Vec<(String, bool)> {
    let mut out = Vec::new();
    for n in [2, 3] {
        for g in [class_graph(n).unwrap(), bundle_graph(n).unwrap()] {
            out.push((export(&g, ExportFormat::Dot), validate(&g).is_ok()));
        }
    }
    out
}

fn main() {
    for (dot, ok) in run_example() {
        println!("// valid: {ok}\n{dot}");
    }
}
