"""
Template management for text reports.
"""
import os
from typing import Any, Dict, List

from jinja2 import Environment, FileSystemLoader, StrictUndefined, TemplateNotFound

from .exceptions import ReportError


class TemplateManager:
    """Manages report templates."""

    def __init__(self, template_dir=None):
        self.template_dir = template_dir or self._get_default_template_dir()
        self.env = Environment(
            loader=FileSystemLoader(self.template_dir),
            trim_blocks=True,
            lstrip_blocks=True,
            keep_trailing_newline=True,
            undefined=StrictUndefined,
        )

    def _get_default_template_dir(self):
        current_dir = os.path.dirname(os.path.abspath(__file__))
        return os.path.join(current_dir, 'templates')

    def render_template_file(self, template_name: str, context: Dict[str, Any]) -> str:
        """Load and render template file; trailing spaces are stripped from every line."""
        try:
            template = self.env.get_template(template_name)
            text = template.render(**context)
        except TemplateNotFound:
            raise ReportError(f"Template '{template_name}' not found")
        except Exception as e:
            raise ReportError(f"Error rendering template '{template_name}': {str(e)}")
        return ''.join(line.rstrip() + '\n' for line in text.splitlines())

    def list_templates(self) -> List[str]:
        return sorted(self.env.list_templates(extensions=['j2']))
