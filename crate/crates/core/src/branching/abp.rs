use num_traits::{One, Zero};

use super::affine::AffineForm;
use crate::algebra::{Matrix, Scalar, SparsePoly};
use crate::error::{Error, Result};

/// An algebraic branching program with affine edge weights, stored as its
/// layer adjacency matrices.
///
/// Layer `i` maps the nodes of `V_{i−1}` to those of `V_i`; the first layer
/// has one row (the source) and the last one column (the sink). The
/// computed polynomial is the `1 × 1` product of all layers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Abp {
    nvars: usize,
    layers: Vec<Matrix<AffineForm>>,
}

impl Abp {
    pub fn new(nvars: usize, layers: Vec<Matrix<AffineForm>>) -> Result<Self> {
        check_layer_chain(layers.iter().map(|m| (m.rows(), m.cols())))?;
        for (i, layer) in layers.iter().enumerate() {
            if let Some(bad) = layer.entries().iter().find(|f| f.arity() > nvars) {
                return Err(Error::Shape(format!(
                    "layer {i} references variable x{} but the program has {nvars} variables",
                    bad.arity() - 1
                )));
            }
        }
        Ok(Abp { nvars, layers })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[Matrix<AffineForm>] {
        &self.layers
    }

    /// Sizes of the vertex layers `V_0, …, V_d`.
    pub fn layer_widths(&self) -> Vec<usize> {
        std::iter::once(1)
            .chain(self.layers.iter().map(Matrix::cols))
            .collect()
    }

    pub fn width(&self) -> usize {
        self.layer_widths().into_iter().max().unwrap_or(1)
    }

    /// `n · w · d`.
    pub fn size(&self) -> usize {
        self.nvars * self.width() * self.depth()
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.nvars {
            return Err(Error::dimension("ABP evaluation", self.nvars, point.len()));
        }
        let mut acc: Option<Matrix<Scalar>> = None;
        for layer in &self.layers {
            let m = layer.try_map(|f| f.eval(point))?;
            acc = Some(match acc {
                None => m,
                Some(a) => a.matmul(&m)?,
            });
        }
        let acc = acc.expect("programs have at least one layer");
        Ok(acc.get(0, 0).clone())
    }

    /// The computed polynomial, by symbolic multiplication of the layers.
    pub fn expand(&self) -> SparsePoly {
        let n = self.nvars;
        let mut acc: Option<Matrix<SparsePoly>> = None;
        for layer in &self.layers {
            let m = layer.map(|f| f.to_poly(n));
            acc = Some(match acc {
                None => m,
                Some(a) => a.matmul(&m).expect("layer chain validated"),
            });
        }
        acc.expect("programs have at least one layer")
            .get(0, 0)
            .clone()
            .with_nvars(n)
    }

    /// `d` square `w × w` matrices whose product has the computed
    /// polynomial at `(0, 0)` and zeros elsewhere.
    pub fn pad_to_square(&self) -> Vec<Matrix<AffineForm>> {
        let w = self.width();
        self.layers.iter().map(|m| m.padded(w, w)).collect()
    }

    /// Rebuilds a program from square layers, keeping row 0 of the first and
    /// column 0 of the last; computes the `(0, 0)` entry of their product.
    pub fn from_square_matrices(nvars: usize, mats: &[Matrix<AffineForm>]) -> Result<Self> {
        Abp::new(nvars, trim_square_chain(mats)?)
    }

    pub fn negate(&self) -> Abp {
        let mut layers = self.layers.clone();
        layers[0] = layers[0].map(|f| -f.clone());
        Abp {
            nvars: self.nvars,
            layers,
        }
    }

    /// Parallel composition: shared source and sink, disjoint interiors.
    pub fn add(&self, other: &Abp) -> Result<Abp> {
        if self.depth() != other.depth() {
            return Err(Error::Shape(format!(
                "cannot add programs of depth {} and {}; pad the shorter one first",
                self.depth(),
                other.depth()
            )));
        }
        let layers = merge_parallel(&self.layers, &other.layers)?;
        Abp::new(self.nvars.max(other.nvars), layers)
    }

    pub fn sub(&self, other: &Abp) -> Result<Abp> {
        self.add(&other.negate())
    }

    /// Appends `1 × 1` identity layers up to `depth`.
    pub fn pad_depth(&self, depth: usize) -> Abp {
        let mut layers = self.layers.clone();
        while layers.len() < depth {
            layers.push(Matrix::from_fn(1, 1, |_, _| {
                AffineForm::constant(Scalar::one())
            }));
        }
        Abp {
            nvars: self.nvars,
            layers,
        }
    }
}

/// Validates source/sink form and consecutive layer compatibility.
pub(crate) fn check_layer_chain(dims: impl Iterator<Item = (usize, usize)>) -> Result<()> {
    let dims: Vec<(usize, usize)> = dims.collect();
    let Some(&(first_rows, _)) = dims.first() else {
        return Err(Error::EmptyInput("branching program layers"));
    };
    if first_rows != 1 {
        return Err(Error::Shape(format!(
            "first layer must have one row (the source), found {first_rows}"
        )));
    }
    let (_, last_cols) = dims[dims.len() - 1];
    if last_cols != 1 {
        return Err(Error::Shape(format!(
            "last layer must have one column (the sink), found {last_cols}"
        )));
    }
    for (i, pair) in dims.windows(2).enumerate() {
        if pair[0].1 != pair[1].0 {
            return Err(Error::Shape(format!(
                "layer {} has {} columns but layer {} has {} rows",
                i,
                pair[0].1,
                i + 1,
                pair[1].0
            )));
        }
        if pair[0].1 == 0 {
            return Err(Error::Shape(format!("layer {i} has width zero")));
        }
    }
    Ok(())
}

pub(crate) fn trim_square_chain<T: Clone + Zero>(mats: &[Matrix<T>]) -> Result<Vec<Matrix<T>>> {
    let Some(first) = mats.first() else {
        return Err(Error::EmptyInput("square layer list"));
    };
    let w = first.rows();
    if let Some((i, m)) = mats
        .iter()
        .enumerate()
        .find(|(_, m)| m.rows() != w || m.cols() != w)
    {
        return Err(Error::dimension(
            "square layer",
            format!("{w}x{w}"),
            format!("layer {i} is {}x{}", m.rows(), m.cols()),
        ));
    }
    let d = mats.len();
    let mut out: Vec<Matrix<T>> = mats.to_vec();
    out[0] = out[0].row_matrix(0);
    out[d - 1] = out[d - 1].col_matrix(0);
    Ok(out)
}

/// Layers of the program computing the sum of two equal-depth programs.
pub(crate) fn merge_parallel<T: Clone + Zero>(
    a: &[Matrix<T>],
    b: &[Matrix<T>],
) -> Result<Vec<Matrix<T>>> {
    let d = a.len();
    if d == 1 {
        let mut m = a[0].clone();
        let v = m.get(0, 0).clone() + b[0].get(0, 0).clone();
        m.set(0, 0, v);
        return Ok(vec![m]);
    }
    let mut layers = Vec::with_capacity(d);
    layers.push(a[0].hconcat(&b[0])?);
    for i in 1..d - 1 {
        layers.push(a[i].direct_sum(&b[i]));
    }
    layers.push(a[d - 1].vconcat(&b[d - 1])?);
    Ok(layers)
}
