"""Regenerate src/polyfock/data/ekm_coeffs.csv from the symbolic expansion."""
from polyfock.ekm_table import DEFAULT_PATH, write_table

if __name__ == "__main__":
    write_table(DEFAULT_PATH)
    print(f"wrote {DEFAULT_PATH}")
