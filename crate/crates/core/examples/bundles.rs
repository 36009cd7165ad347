// Recover the bundles from the class graph by merging vertices with identical neighbourhoods.

use congrua::closuregraph::{bundle_graph, class_graph, derive_bundles};

pub fn run_example() -> Vec<(usize, Vec<Vec<String>>, usize)> {
    [2, 3]
        .into_iter()
        .map(|n| {
            let p = derive_bundles(&class_graph(n).unwrap()).unwrap();
            (n, p.blocks, bundle_graph(n).unwrap().vertices().len())
        })
        .collect()
}

fn main() {
    for (n, blocks, count) in run_example() {
        println!("n={n}: {} bundles (graph has {count})", blocks.len());
        for b in blocks {
            println!("  {{{}}}", b.join(", "));
        }
    }
}
