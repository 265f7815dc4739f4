//! Dense covariant tensors over a ring-like element type.
//!
//! The same container holds plain scalar components and [`Jet`](crate::Jet)
//! fields, so the curvature formulas are written once and evaluated either
//! pointwise or as truncated Taylor fields.

use crate::scalar::Scalar;

/// Minimal ring interface shared by scalars and jets.
pub trait Element<T>: Clone + Send + Sync {
    /// Additive identity with the same shape as `self`.
    fn zero_like(&self) -> Self;
    fn constant_like(&self, c: T) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn scaled(&self, c: T) -> Self;
    /// `self += a * b`
    fn acc_product(&mut self, a: &Self, b: &Self);
    /// `self += c * a`
    fn acc_scaled(&mut self, a: &Self, c: T);
    /// Value at the expansion point.
    fn value(&self) -> T;
}

macro_rules! scalar_element {
    ($t:ty) => {
        impl Element<$t> for $t {
            #[inline]
            fn zero_like(&self) -> Self {
                0.0
            }
            #[inline]
            fn constant_like(&self, c: $t) -> Self {
                c
            }
            #[inline]
            fn plus(&self, o: &Self) -> Self {
                self + o
            }
            #[inline]
            fn minus(&self, o: &Self) -> Self {
                self - o
            }
            #[inline]
            fn times(&self, o: &Self) -> Self {
                self * o
            }
            #[inline]
            fn scaled(&self, c: $t) -> Self {
                self * c
            }
            #[inline]
            fn acc_product(&mut self, a: &Self, b: &Self) {
                *self += a * b;
            }
            #[inline]
            fn acc_scaled(&mut self, a: &Self, c: $t) {
                *self += a * c;
            }
            #[inline]
            fn value(&self) -> $t {
                *self
            }
        }
    };
}

scalar_element!(f32);
scalar_element!(f64);

/// Dense tensor of rank `rank` over dimension `dim`, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<E> {
    dim: usize,
    rank: usize,
    data: Vec<E>,
}

/// Calls `f` with every multi-index of the given rank over `0..dim`, in
/// row-major order.
pub fn for_each_index(dim: usize, rank: usize, mut f: impl FnMut(&[usize])) {
    let mut idx = vec![0usize; rank];
    let total = dim.pow(rank as u32);
    for _ in 0..total {
        f(&idx);
        for slot in (0..rank).rev() {
            idx[slot] += 1;
            if idx[slot] < dim {
                break;
            }
            idx[slot] = 0;
        }
    }
}

impl<E> Tensor<E> {
    pub fn from_fn(dim: usize, rank: usize, mut f: impl FnMut(&[usize]) -> E) -> Self {
        let mut data = Vec::with_capacity(dim.pow(rank as u32));
        for_each_index(dim, rank, |i| data.push(f(i)));
        Self { dim, rank, data }
    }

    pub fn from_vec(dim: usize, rank: usize, data: Vec<E>) -> Self {
        assert_eq!(data.len(), dim.pow(rank as u32), "tensor data length");
        Self { dim, rank, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn data(&self) -> &[E] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [E] {
        &mut self.data
    }

    #[inline]
    pub fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank);
        idx.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    #[inline]
    pub fn get(&self, idx: &[usize]) -> &E {
        &self.data[self.offset(idx)]
    }

    #[inline]
    pub fn get_mut(&mut self, idx: &[usize]) -> &mut E {
        let o = self.offset(idx);
        &mut self.data[o]
    }

    #[inline]
    pub fn set(&mut self, idx: &[usize], v: E) {
        let o = self.offset(idx);
        self.data[o] = v;
    }

    pub fn map<F>(&self, f: impl FnMut(&E) -> F) -> Tensor<F> {
        Tensor { dim: self.dim, rank: self.rank, data: self.data.iter().map(f).collect() }
    }
}

impl<E: Copy> Tensor<E> {
    #[inline]
    pub fn at(&self, idx: &[usize]) -> E {
        self.data[self.offset(idx)]
    }
}

impl<T: Scalar> Tensor<T> {
    pub fn zeros(dim: usize, rank: usize) -> Self {
        Self::from_fn(dim, rank, |_| T::zero())
    }

    /// Euclidean identity matrix as a rank-2 tensor.
    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, 2, |i| if i[0] == i[1] { T::one() } else { T::zero() })
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Sum of squares of all components.
    pub fn norm_sq(&self) -> T {
        self.data.iter().map(|v| *v * *v).sum()
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a - b)
    }

    pub fn scale(&self, c: T) -> Self {
        self.map(|v| *v * c)
    }

    pub fn zip(&self, o: &Self, f: impl Fn(T, T) -> T) -> Self {
        assert_eq!((self.dim, self.rank), (o.dim, o.rank), "tensor shape mismatch");
        Tensor {
            dim: self.dim,
            rank: self.rank,
            data: self.data.iter().zip(&o.data).map(|(a, b)| f(*a, *b)).collect(),
        }
    }

    /// Largest absolute component of `self - o`.
    pub fn max_abs_diff(&self, o: &Self) -> T {
        self.sub(o).max_abs()
    }

    /// Matrix product for rank-2 tensors.
    pub fn matmul(&self, o: &Self) -> Self {
        assert!(self.rank == 2 && o.rank == 2);
        let n = self.dim;
        Self::from_fn(n, 2, |i| (0..n).map(|k| self.at(&[i[0], k]) * o.at(&[k, i[1]])).sum())
    }

    pub fn transpose(&self) -> Self {
        assert_eq!(self.rank, 2);
        Self::from_fn(self.dim, 2, |i| self.at(&[i[1], i[0]]))
    }

    /// Trace of a rank-2 tensor in an orthonormal frame.
    pub fn trace(&self) -> T {
        assert_eq!(self.rank, 2);
        (0..self.dim).map(|i| self.at(&[i, i])).sum()
    }
}

/// Kulkarni–Nomizu product
/// `(S⊙T)_{ijkl} = S_ik T_jl + S_jl T_ik − S_il T_jk − S_jk T_il`.
pub fn kulkarni_nomizu<T, E: Element<T>>(s: &Tensor<E>, t: &Tensor<E>) -> Tensor<E> {
    assert!(s.rank() == 2 && t.rank() == 2 && s.dim() == t.dim());
    let n = s.dim();
    Tensor::from_fn(n, 4, |x| {
        let (i, j, k, l) = (x[0], x[1], x[2], x[3]);
        let mut acc = s.get(&[i, k]).times(t.get(&[j, l]));
        acc.acc_product(s.get(&[j, l]), t.get(&[i, k]));
        acc.minus(&s.get(&[i, l]).times(t.get(&[j, k])))
            .minus(&s.get(&[j, k]).times(t.get(&[i, l])))
    })
}
