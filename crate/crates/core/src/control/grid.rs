use std::collections::HashMap;
use std::fmt::Write as _;

use crate::ff::Elem;

/// Axial neighbour offsets, counter-clockwise starting east.
const DIRECTIONS: [(i32, i32); 6] = [(1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1)];

/// Hexagonal board of concentric rings around one centre cell.
///
/// Cells are numbered ring by ring (0-based here, so cell `i` is `x_{i+1}`);
/// within a ring the walk starts at the south-west corner and proceeds
/// counter-clockwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HexGrid {
    radius: usize,
    coords: Vec<(i32, i32)>,
    ring: Vec<usize>,
    neighbors: Vec<[Option<usize>; 6]>,
}

impl HexGrid {
    pub fn new(radius: usize) -> HexGrid {
        let mut coords = vec![(0, 0)];
        let mut ring = vec![0];
        for k in 1..=radius as i32 {
            let (dq, dr) = DIRECTIONS[4];
            let mut h = (dq * k, dr * k);
            for &(sq, sr) in &DIRECTIONS {
                for _ in 0..k {
                    coords.push(h);
                    ring.push(k as usize);
                    h = (h.0 + sq, h.1 + sr);
                }
            }
        }
        let index: HashMap<(i32, i32), usize> =
            coords.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let neighbors = coords
            .iter()
            .map(|&(q, r)| DIRECTIONS.map(|(dq, dr)| index.get(&(q + dq, r + dr)).copied()))
            .collect();
        HexGrid {
            radius,
            coords,
            ring,
            neighbors,
        }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn num_cells(&self) -> usize {
        self.coords.len()
    }

    /// Axial coordinates of a cell.
    pub fn coordinates(&self, cell: usize) -> (i32, i32) {
        self.coords[cell]
    }

    pub fn ring(&self, cell: usize) -> usize {
        self.ring[cell]
    }

    /// Neighbour slots; `None` where the slot lies outside the board.
    pub fn neighbor_slots(&self, cell: usize) -> &[Option<usize>; 6] {
        &self.neighbors[cell]
    }

    pub fn neighbors(&self, cell: usize) -> impl Iterator<Item = usize> + '_ {
        self.neighbors[cell].iter().flatten().copied()
    }

    /// Cells of rings `0..=rings`.
    pub fn disc(&self, rings: usize) -> std::ops::Range<usize> {
        0..(1 + 3 * rings * (rings + 1)).min(self.num_cells())
    }

    /// Cells of the outermost ring.
    pub fn outer_ring(&self) -> std::ops::Range<usize> {
        match self.radius {
            0 => 0..1,
            r => self.disc(r - 1).end..self.num_cells(),
        }
    }

    fn center_px(&self, cell: usize, size: f64) -> (f64, f64) {
        let (q, r) = self.coords[cell];
        let s3 = 3f64.sqrt();
        (size * (s3 * q as f64 + s3 / 2.0 * r as f64), size * 1.5 * r as f64)
    }

    /// Cell containing the pixel offset `(x, y)` from the board centre.
    fn cell_at(&self, x: f64, y: f64, size: f64, index: &HashMap<(i32, i32), usize>) -> Option<usize> {
        let fq = (3f64.sqrt() / 3.0 * x - y / 3.0) / size;
        let fr = (2.0 / 3.0 * y) / size;
        let fs = -fq - fr;
        let (mut q, mut r, s) = (fq.round(), fr.round(), fs.round());
        let (dq, dr, ds) = ((q - fq).abs(), (r - fr).abs(), (s - fs).abs());
        if dq > dr && dq > ds {
            q = -r - s;
        } else if dr > ds {
            r = -q - s;
        }
        index.get(&(q as i32, r as i32)).copied()
    }

    /// SVG drawing of a state of colour values.
    pub fn to_svg(&self, state: &[Elem]) -> String {
        let size = 12.0;
        let extent = size * (3f64.sqrt() * (self.radius as f64 + 1.0)) + size;
        let mut s = String::new();
        writeln!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.1} {:.1} {:.1} {:.1}\">",
            -extent,
            -extent,
            2.0 * extent,
            2.0 * extent
        )
        .expect("write to String");
        for cell in 0..self.num_cells() {
            let (cx, cy) = self.center_px(cell, size);
            let points: Vec<String> = (0..6)
                .map(|i| {
                    let angle = std::f64::consts::PI / 180.0 * (60.0 * i as f64 - 30.0);
                    format!("{:.2},{:.2}", cx + size * angle.cos(), cy + size * angle.sin())
                })
                .collect();
            let (r, g, b) = color_rgb(state[cell]);
            writeln!(
                s,
                "  <polygon points=\"{}\" fill=\"#{r:02x}{g:02x}{b:02x}\" stroke=\"#808080\" stroke-width=\"0.5\"><title>x{}</title></polygon>",
                points.join(" "),
                cell + 1
            )
            .expect("write to String");
        }
        s.push_str("</svg>\n");
        s
    }

    /// Binary PPM (P6) raster of a state; pixels outside the board are grey.
    pub fn to_ppm(&self, state: &[Elem], width: usize) -> Vec<u8> {
        let index: HashMap<(i32, i32), usize> =
            self.coords.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let size = width as f64 / (2.0 * 3f64.sqrt() * (self.radius as f64 + 1.0));
        let half = width as f64 / 2.0;
        let mut out = format!("P6\n{width} {width}\n255\n").into_bytes();
        for py in 0..width {
            for px in 0..width {
                let (x, y) = (px as f64 + 0.5 - half, py as f64 + 0.5 - half);
                let (r, g, b) = match self.cell_at(x, y, size, &index) {
                    Some(c) => color_rgb(state[c]),
                    None => (0x40, 0x40, 0x40),
                };
                out.extend_from_slice(&[r, g, b]);
            }
        }
        out
    }
}

/// Display colour for a GF(4) cell value.
pub fn color_rgb(x: Elem) -> (u8, u8, u8) {
    match x {
        0 => (0x2e, 0x8b, 0x3d),
        1 => (0xff, 0xff, 0xff),
        2 => (0xf2, 0xd0, 0x24),
        _ => (0xd7, 0x26, 0x3d),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout() {
        let g = HexGrid::new(10);
        assert_eq!(g.num_cells(), 331);
        assert_eq!(g.disc(2), 0..19);
        assert_eq!(g.outer_ring(), 271..331);
        assert_eq!(g.neighbors(0).count(), 6);
        let corners = g.outer_ring().filter(|&c| g.neighbors(c).count() == 3).count();
        assert_eq!(corners, 6);
        assert_eq!(g.neighbors(g.outer_ring().start).count(), 3);
        for c in 0..331 {
            for n in g.neighbors(c) {
                assert!(g.neighbors(n).any(|m| m == c));
            }
            if g.ring(c) < 10 {
                assert_eq!(g.neighbors(c).count(), 6);
            }
        }
    }

    /// Hex distance from the centre equals the ring number.
    #[test]
    fn rings_match_axial_distance() {
        let g = HexGrid::new(10);
        for c in 0..331 {
            let (q, r) = g.coordinates(c);
            let d = (q.abs() + r.abs() + (q + r).abs()) / 2;
            assert_eq!(d as usize, g.ring(c));
        }
        let mut seen = std::collections::HashSet::new();
        assert!((0..331).all(|c| seen.insert(g.coordinates(c))));
    }

    #[test]
    fn renderings() {
        let g = HexGrid::new(10);
        let state = vec![1; 331];
        let svg = g.to_svg(&state);
        assert_eq!(svg.matches("<polygon").count(), 331);
        let ppm = g.to_ppm(&state, 64);
        assert!(ppm.starts_with(b"P6\n64 64\n255\n"));
        assert_eq!(ppm.len(), 13 + 64 * 64 * 3);
        // The centre pixel lies in cell 0.
        let index: HashMap<(i32, i32), usize> =
            (0..331).map(|c| (g.coordinates(c), c)).collect();
        assert_eq!(g.cell_at(0.0, 0.0, 5.0, &index), Some(0));
    }
}
