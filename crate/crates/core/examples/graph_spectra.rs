// Connectivity and spectral data of the six-node preset digraphs.

use dynavg::graph::{preset, PRESET_NAMES};
use dynavg::{Edge, WeightedDigraph};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for name in PRESET_NAMES {
        let g = preset(name)?;
        let sp = g.spectral_summary()?;
        println!(
            "{name}: {} edges, strongly connected {}, balanced {}, components {}, lambda_hat_2 {:.4}, re_lambda_2 {:.4}",
            g.edge_count(),
            g.is_strongly_connected(),
            g.is_weight_balanced(1e-10),
            g.scc_count(),
            sp.lambda_hat_2,
            sp.re_lambda_2,
        );
    }

    // A weighted 3-cycle with a chord is strongly connected but not balanced.
    let g = WeightedDigraph::from_edges(3, &[Edge(1, 2, 1.0), Edge(2, 3, 2.0), Edge(3, 1, 1.0), Edge(1, 3, 0.5)])?;
    let l = g.laplacian();
    let mut ones = vec![0.0; 3];
    l.apply(&[1.0; 3], &mut ones);
    assert_eq!(ones, vec![0.0; 3]);
    assert!(g.is_strongly_connected() && !g.is_weight_balanced(1e-10));
    println!("chorded cycle: in-degrees {:?}, out-degrees {:?}", (0..3).map(|i| g.in_degree(i)).collect::<Vec<_>>(), (0..3).map(|i| g.out_degree(i)).collect::<Vec<_>>());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
