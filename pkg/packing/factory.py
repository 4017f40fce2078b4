"""
Generator factory for creating packing generator instances
"""

from typing import Any

from .base_generator import BaseGenerator
from .hexagonal_generator import HexagonalGenerator
from .laminate_generator import LaminateGenerator
from .random_generator import RandomBundleGenerator


class GeneratorFactory:
    """Factory class for creating generator instances"""

    _generators = {
        'hex': HexagonalGenerator,
        'laminate': LaminateGenerator,
        'random': RandomBundleGenerator,
    }

    @classmethod
    def create(cls, name: str, **params: Any) -> BaseGenerator:
        """
        Create a generator instance by registry name

        Args:
            name: Generator name (e.g., 'hex', 'laminate')
            **params: Keyword arguments for the generator constructor

        Returns:
            Generator instance

        Raises:
            ValueError: If the generator is not registered
        """
        key = name.lower()

        if key not in cls._generators:
            available = ', '.join(cls._generators.keys())
            raise ValueError(f"Unsupported generator '{name}'. Available: {available}")

        return cls._generators[key](**params)

    @classmethod
    def supported(cls) -> list:
        """Get list of registered generator names"""
        return list(cls._generators.keys())

    @classmethod
    def register(cls, name: str, generator_class: type):
        """
        Register a new generator

        Args:
            name: Registry name
            generator_class: Class that inherits from BaseGenerator
        """
        if not issubclass(generator_class, BaseGenerator):
            raise ValueError("Generator class must inherit from BaseGenerator")

        cls._generators[name.lower()] = generator_class
