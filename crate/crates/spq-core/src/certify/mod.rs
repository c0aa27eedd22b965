//! Sum-of-squares certification and refutation.
