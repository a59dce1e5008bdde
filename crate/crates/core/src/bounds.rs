//! Edge-density bound, complete-graph bounds, an explicit `ceil(n/3)`-page
//! layout of `K_n`, reference values for small cliques and arc-diagram SVG.

use thiserror::Error;

use crate::graph::Edge;
use crate::layout::{LinearLayout, VertexOrder};
use crate::search::Verdict;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundsError {
    #[error("no reference value for K_{0}; the table covers 4..=28")]
    OutOfTable(usize),
}

/// Largest edge count of an `n`-vertex graph with a `k`-page rique layout:
/// `(2n-4)k - k^2 + (n-1)`, for `n >= 3`. At `k = 1` this is the planar `3n-6`.
pub fn density_bound(n: usize, k: usize) -> i64 {
    let (n, k) = (n as i64, k as i64);
    (2 * n - 4) * k - k * k + (n - 1)
}

/// The variant `(2n+2)k - k^2 + (n-3)`. It is looser and does not reduce to
/// `3n-6` at one page; [`density_bound`] is the one used everywhere else.
pub fn density_bound_as_stated(n: usize, k: usize) -> i64 {
    let (n, k) = (n as i64, k as i64);
    (2 * n + 2) * k - k * k + (n - 3)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KnLowerBound {
    /// `n - 2 - (sqrt 2 / 2) sqrt((n-2)(n-3))`.
    pub tight: f64,
    /// `(1 - 1/sqrt 2)(n - 2)`.
    pub simplified: f64,
    /// Exact integer ceiling of `tight`.
    pub tight_ceil: usize,
}

pub fn kn_lower_bound(n: usize) -> KnLowerBound {
    assert!(n >= 4, "bound needs n >= 4");
    let nf = n as f64;
    let tight = nf - 2.0 - std::f64::consts::FRAC_1_SQRT_2 * ((nf - 2.0) * (nf - 3.0)).sqrt();
    let simplified = (1.0 - std::f64::consts::FRAC_1_SQRT_2) * (nf - 2.0);
    // k >= tight  <=>  2 (n-2-k)^2 <= (n-2)(n-3), for 0 <= k <= n-2.
    let (a, b) = (n as u64 - 2, (n as u64 - 2) * (n as u64 - 3));
    let tight_ceil = (0..=a)
        .find(|&k| 2 * (a - k) * (a - k) <= b)
        .expect("k = n-2 always qualifies") as usize;
    KnLowerBound {
        tight,
        simplified,
        tight_ceil,
    }
}

/// Page count of [`construct_kn_layout`].
pub fn kn_upper_bound(n: usize) -> usize {
    n.div_ceil(3)
}

/// Hamiltonian zig-zag path `p, p+1, p-1, p+2, p-2, ...` modulo `m` (`m` even).
fn zigzag(p: usize, m: usize) -> Vec<usize> {
    (0..m)
        .map(|t| {
            let off = if t % 2 == 1 { (t as i64 + 1) / 2 } else { -(t as i64 / 2) };
            (p as i64 + off).rem_euclid(m as i64) as usize
        })
        .collect()
}

/// Crossing-free partition of `K_m` on `0..m` (natural order) into
/// `ceil(m/2)` pages.
pub fn zigzag_stack_pages(m: usize) -> Vec<Vec<Edge>> {
    if m < 2 {
        return Vec::new();
    }
    let even = m + m % 2;
    (0..even / 2)
        .map(|p| {
            let path = zigzag(p, even);
            let mut page: Vec<Edge> = path
                .windows(2)
                .filter(|w| w[0] < m && w[1] < m)
                .map(|w| Edge::new(w[0], w[1]))
                .collect();
            page.sort_unstable();
            page
        })
        .collect()
}

/// Layout of `K_n` on `ceil(n/3)` pages in the natural order. With
/// `q = ceil(n/3)`, page `i < q` holds every edge `(i, j)` with `j > i`
/// together with zig-zag stack page `i` of the clique on `q..n`.
pub fn construct_kn_layout(n: usize) -> LinearLayout {
    assert!(n >= 3, "construction needs n >= 3");
    let q = kn_upper_bound(n);
    let rest = n - q;
    let stack = zigzag_stack_pages(rest);
    assert!(stack.len() <= q, "clique remainder needs at most q stack pages");
    let mut pages: Vec<Vec<Edge>> = (0..q)
        .map(|i| (i + 1..n).map(|j| Edge::new(i, j)).collect())
        .collect();
    for (i, sp) in stack.into_iter().enumerate() {
        pages[i].extend(sp.into_iter().map(|e| Edge::new(e.u + q, e.v + q)));
    }
    for p in &mut pages {
        p.sort_unstable();
    }
    LinearLayout::new(VertexOrder::identity(n), pages)
}

/// Reference rique-numbers of `K_n` for `4 <= n <= 28`.
pub fn table_kn(n: usize) -> Result<Verdict, BoundsError> {
    Ok(match n {
        4 => Verdict::Exact(1),
        5..=7 => Verdict::Exact(2),
        8..=11 => Verdict::Exact(3),
        12..=14 => Verdict::Exact(4),
        15..=17 => Verdict::Exact(5),
        18..=21 => Verdict::Exact(6),
        22 => Verdict::Range(6, 7),
        23 | 24 => Verdict::Exact(7),
        25 => Verdict::Range(7, 8),
        26..=28 => Verdict::Exact(8),
        _ => return Err(BoundsError::OutOfTable(n)),
    })
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

/// Arc diagram: vertices on a horizontal line in layout order, one
/// semicircle above the line per edge, colored by page.
pub fn arc_diagram_svg(layout: &LinearLayout) -> String {
    let n = layout.order.len();
    let step = 40.0;
    let margin = 20.0;
    let width = margin * 2.0 + step * (n.saturating_sub(1)) as f64;
    let height = margin * 2.0 + step * n as f64 / 2.0;
    let base = height - margin;
    let x = |v: usize| margin + step * layout.order.position(v) as f64;
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    );
    s.push_str(&format!(
        "<line x1=\"{margin}\" y1=\"{base}\" x2=\"{}\" y2=\"{base}\" stroke=\"#999\"/>\n",
        width - margin
    ));
    for (i, page) in layout.pages.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        s.push_str(&format!("<g class=\"page{}\" stroke=\"{color}\" fill=\"none\">\n", i + 1));
        for &e in page {
            let (x1, x2) = {
                let (a, b) = (x(e.u), x(e.v));
                if a < b { (a, b) } else { (b, a) }
            };
            let r = (x2 - x1) / 2.0;
            s.push_str(&format!("<path d=\"M {x1} {base} A {r} {r} 0 0 1 {x2} {base}\"/>\n"));
        }
        s.push_str("</g>\n");
    }
    for &v in layout.order.sequence() {
        s.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{base}\" r=\"4\" fill=\"black\"/><text x=\"{}\" y=\"{}\" font-size=\"10\" text-anchor=\"middle\">{v}</text>\n",
            x(v),
            x(v),
            base + 14.0
        ));
    }
    s.push_str("</svg>\n");
    s
}
