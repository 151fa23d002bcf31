#!/usr/bin/env python3
"""
Development Environment Setup Script
Sets up the nersim development environment with proper dependencies and validation.
"""

import subprocess
import sys
from pathlib import Path

import yaml


def check_python_version():
    """Verify Python version compatibility"""
    if sys.version_info < (3, 9):
        print("❌ Python 3.9+ required")
        return False
    print(f"✅ Python {sys.version_info.major}.{sys.version_info.minor}.{sys.version_info.micro}")
    return True


def install_dependencies():
    """Install project dependencies"""
    print("📦 Installing dependencies...")

    try:
        subprocess.check_call([sys.executable, "-m", "pip", "install", "-e", "."])
        subprocess.check_call([sys.executable, "-m", "pip", "install", "-r", "requirements-dev.txt"])
        print("✅ Dependencies installed")
        return True
    except subprocess.CalledProcessError as e:
        print(f"❌ Failed to install dependencies: {e}")
        return False


def validate_physics_modules():
    """Test import of the physics packages"""
    print("🔧 Validating physics modules...")

    modules_to_test = [
        "nersim.core.spin",
        "nersim.core.atomic",
        "nersim.core.physics",
        "nersim.core.control",
        "nersim.cli.main",
    ]

    for module in modules_to_test:
        try:
            __import__(module)
            print(f"✅ {module}")
        except ImportError as e:
            print(f"❌ {module}: {e}")
            return False

    return True


def create_example_configs():
    """Write the example experiment configs if missing"""
    from nersim.testing import example_configs

    config_dir = Path("configs/experiments")
    config_dir.mkdir(parents=True, exist_ok=True)
    for name, data in example_configs().items():
        path = config_dir / name
        if path.exists():
            print(f"✅ Config exists: {path}")
            continue
        with open(path, "w", encoding="utf-8") as f:
            yaml.safe_dump(data, f, sort_keys=False)
        print(f"✅ Created {path}")


def main():
    """Main setup routine"""
    print("🚀 nersim Development Environment Setup\n")

    if not check_python_version():
        return 1

    if not install_dependencies():
        return 1

    if not validate_physics_modules():
        print("⚠️  Module validation failed - check dependencies")
        return 1

    create_example_configs()

    print("\n✅ Development environment setup complete!")
    print("\nNext steps:")
    print("  1. Run: nersim simulate --config configs/experiments/sb_pi_pulse.yaml")
    print("  2. Run: python -m pytest tests/")

    return 0


if __name__ == "__main__":
    sys.exit(main())
