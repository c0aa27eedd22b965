//! Applications: sparsity bounds, convex SPQ regression, Newton-SPQ.
