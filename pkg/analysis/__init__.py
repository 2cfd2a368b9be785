"""Variable changes between stress, strain-sum, potential and displacement, plus run diagnostics."""
