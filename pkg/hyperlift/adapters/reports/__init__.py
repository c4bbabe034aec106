"""Report sinks: JSON lines and the rich console."""
