//! Structure-exploiting nonnegativity and convexity analysis.
