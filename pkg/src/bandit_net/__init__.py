"""Multi-agent bandits with costly neighbor observation."""
