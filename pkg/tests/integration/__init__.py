"""End-to-end tests over full-size experiments."""
