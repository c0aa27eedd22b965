//! C ABI for the SPQ polynomial toolkit (placeholder).
