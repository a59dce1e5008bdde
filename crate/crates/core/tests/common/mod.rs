use rique_core::corpus::hamiltonian_paths;
use rique_core::layout::find_pattern;
use rique_core::{Graph, VertexOrder};

/// Hamiltonian paths whose vertex order leaves all edges on one
/// pattern-free page.
pub fn one_page_paths(g: &Graph) -> Vec<Vec<usize>> {
    hamiltonian_paths(g)
        .into_iter()
        .filter(|p| {
            let order = VertexOrder::from_sequence(p.clone()).unwrap();
            find_pattern(&order, g.edges()).is_none()
        })
        .collect()
}
