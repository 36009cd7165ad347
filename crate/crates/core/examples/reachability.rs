// Up-sets (what a small perturbation can reach) and down-sets (closure contents).

use congrua::closuregraph::{class_graph, reach_set, Direction};

pub fn run_example() -> Vec<String> {
    let mut out = Vec::new();
    for (n, tag) in [(2, "iii"), (2, "v_lambda"), (3, "9"), (3, "4")] {
        let g = class_graph(n).unwrap();
        let up = reach_set(&g, tag, Direction::Up).unwrap();
        let down = reach_set(&g, tag, Direction::Down).unwrap();
        out.push(format!("n={n} {tag}: up {{{}}} down {{{}}}", up.join(", "), down.join(", ")));
    }
    out
}

fn main() {
    for l in run_example() {
        println!("{l}");
    }
}
