//! Convex SPQ polynomial optimization.
