//! Dense n-dimensional array with an optional gradient slot.

/// A row-major n-d array of f64 values. Parameters carry a gradient buffer of
/// the same shape; activations leave it empty.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    pub shape: Vec<usize>,
    pub data: Vec<f64>,
    pub grad: Option<Vec<f64>>,
}

impl Tensor {
    pub fn new(shape: Vec<usize>, data: Vec<f64>) -> Self {
        assert_eq!(
            shape.iter().product::<usize>(),
            data.len(),
            "shape {:?} does not match {} values",
            shape,
            data.len()
        );
        Tensor { shape, data, grad: None }
    }

    pub fn zeros(shape: Vec<usize>) -> Self {
        let n = shape.iter().product();
        Tensor { shape, data: vec![0.0; n], grad: None }
    }

    pub fn filled(shape: Vec<usize>, value: f64) -> Self {
        let n = shape.iter().product();
        Tensor { shape, data: vec![value; n], grad: None }
    }

    /// Promote this tensor to a trainable parameter (adds the grad buffer).
    pub fn into_param(mut self) -> Self {
        self.grad = Some(vec![0.0; self.data.len()]);
        self
    }

    pub fn numel(&self) -> usize {
        self.data.len()
    }

    pub fn zero_grad(&mut self) {
        if let Some(g) = &mut self.grad {
            g.iter_mut().for_each(|v| *v = 0.0);
        }
    }

    /// Gradient buffer; panics if this tensor is not a parameter.
    pub fn grad(&self) -> &[f64] {
        self.grad.as_deref().expect("tensor has no gradient slot")
    }

    pub fn grad_mut(&mut self) -> &mut [f64] {
        self.grad.as_deref_mut().expect("tensor has no gradient slot")
    }

    /// Batch dimension (first axis).
    pub fn batch(&self) -> usize {
        self.shape[0]
    }

    pub fn assert_shape(&self, shape: &[usize]) {
        assert_eq!(self.shape, shape, "expected shape {shape:?}, got {:?}", self.shape);
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}
