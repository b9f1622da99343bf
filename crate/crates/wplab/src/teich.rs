//! Weil-Petersson metric layer (filled in after the series layer).
