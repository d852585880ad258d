"""Dataset CSV files, model files and report files."""
