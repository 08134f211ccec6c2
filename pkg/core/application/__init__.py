"""Application layer - services, training, interfaces, commands and DTOs."""
