from .csvio import load_csv, write_csv
from .generators import add_group_column, feature_names, generate_blobs, generate_two_moons

__all__ = ['add_group_column', 'feature_names', 'generate_blobs', 'generate_two_moons', 'load_csv', 'write_csv']
