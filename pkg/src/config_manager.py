#!/usr/bin/env python3
"""
Config Manager for dynkin-walk
Numeric tolerances, verification range and corpus defaults in an INI file
"""

from pathlib import Path
from configparser import ConfigParser
from typing import Optional

DEFAULT_CONFIG_DIR = Path.home() / '.config' / 'dynkin-walk'

DEFAULTS = {
    'general': {
        'log_level': 'INFO',
        'output_format': 'text',
    },
    'numeric': {
        'eigen_tol': '1e-8',
        'jacobi_threshold': '1e-13',
        'jacobi_max_sweeps': '100',
        'check_tol': '1e-9',
        'det_tol': '1e-8',
        'orth_tol': '1e-9',
        'relwa_tol': '1e-7',
        'vanish_tol': '1e-10',
    },
    'verify': {
        'n_from': '4',
        'n_to': '64',
        'workers': '0',
        'relwa_n_max': '40',
        'numeric_n_max': '24',
    },
    'corpus': {
        'seed': '42',
        'count': '1000',
        'n_max': '16',
    },
}


class ConfigManager:
    def __init__(self, config_dir: Optional[Path] = None):
        self.config_dir = Path(config_dir) if config_dir else DEFAULT_CONFIG_DIR
        self.config_file = self.config_dir / 'config.ini'
        self.log_dir = self.config_dir / 'logs'

        self.config_dir.mkdir(parents=True, exist_ok=True)

        self.config = ConfigParser()
        self.load_config()

    def load_config(self):
        """Load the config file, writing defaults on first run"""
        self.config.read_dict(DEFAULTS)
        if self.config_file.exists():
            self.config.read(self.config_file)
        else:
            self.save_config()

    def save_config(self):
        with open(self.config_file, 'w') as f:
            self.config.write(f)

    def get(self, section, key, fallback=None):
        return self.config.get(section, key, fallback=fallback)

    def getboolean(self, section, key, fallback=False):
        return self.config.getboolean(section, key, fallback=fallback)

    def getint(self, section, key, fallback=0):
        return self.config.getint(section, key, fallback=fallback)

    def getfloat(self, section, key, fallback=0.0):
        return self.config.getfloat(section, key, fallback=fallback)

    def set(self, section, key, value):
        """Set a value and persist it"""
        if not self.config.has_section(section):
            self.config.add_section(section)
        self.config.set(section, key, str(value))
        self.save_config()
