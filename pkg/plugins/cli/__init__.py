# Command-line layer: model files, commands and report rendering
from cli.model_file import ModelFile, Token, load_model, parse_model, parse_polynomial, print_model, tokenize
from cli.report_exporter import Report, export_to_csv, parse_records, render_records, render_text

__all__ = [
    'ModelFile', 'Token', 'load_model', 'parse_model', 'parse_polynomial', 'print_model', 'tokenize',
    'Report', 'export_to_csv', 'parse_records', 'render_records', 'render_text',
]
