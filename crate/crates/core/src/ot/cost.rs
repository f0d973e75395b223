use crate::measure::DiscreteMeasure;
use crate::par::{for_each_row, Exec};

/// Dense row-major cost matrix between source rows and target columns.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl CostMatrix {
    /// `|x_i - p_j|² / 2` for every source/target pair.
    pub fn quadratic(source: &DiscreteMeasure, target: &DiscreteMeasure, exec: Exec) -> Self {
        let (rows, cols) = (source.len(), target.len());
        let mut data = vec![0.0; rows * cols];
        for_each_row(exec, &mut data, cols, |i, row| {
            let x = source.point(i);
            for (j, c) in row.iter_mut().enumerate() {
                *c = 0.5 * crate::geometry::dist2(x, target.point(j));
            }
        });
        CostMatrix { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "cost matrix shape mismatch");
        CostMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn negated(&self) -> Self {
        CostMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|c| -c).collect(),
        }
    }

    pub fn transposed(&self) -> Self {
        let mut data = vec![0.0; self.data.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        CostMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    #[test]
    fn parallel_assembly_is_bit_identical() {
        let pts = |off: f64| {
            (0..37)
                .map(|k| Point::new(vec![(k as f64 * 0.37 + off).sin(), (k as f64 * 1.3).cos()]).unwrap())
                .collect::<Vec<_>>()
        };
        let a = DiscreteMeasure::new(pts(0.0), vec![1.0; 37]).unwrap();
        let b = DiscreteMeasure::new(pts(0.5), vec![1.0; 37]).unwrap();
        let s = CostMatrix::quadratic(&a, &b, Exec::Sequential);
        let p = CostMatrix::quadratic(&a, &b, Exec::Parallel);
        assert_eq!(s, p);
        assert_eq!(s.transposed().get(3, 5), s.get(5, 3));
    }
}
