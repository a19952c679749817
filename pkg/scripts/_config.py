"""Turn a dataclass config into command-line flags."""
import argparse
from dataclasses import fields


def parse_config(cls, argv=None):
    parser = argparse.ArgumentParser(description=cls.__doc__)
    for f in fields(cls):
        parser.add_argument(f"--{f.name.replace('_', '-')}", type=type(f.default), default=f.default)
    return cls(**vars(parser.parse_args(argv)))
