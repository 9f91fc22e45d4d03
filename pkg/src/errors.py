# Exceptions du moteur TA / OA
from typing import Optional


class ModelError(ValueError):
    """Erreur de base du modèle (hérite de ValueError pour rester compatible)."""


class ValidationError(ModelError):
    """Paramètre invalide : composante négative, contrat de forme violé, etc."""


class DomainError(ModelError):
    """Point d'évaluation hors du domaine (N < domain_min, s hors de (0, N̄])."""


class KinkError(ModelError):
    """Évaluation d'une dérivée au coude Ñ (ou trop près de lui)."""


class BracketError(ModelError):
    """Pas de changement de signe dans l'intervalle de recherche."""


class NoRootError(BracketError):
    """Les régimes ne basculent pas dans l'intervalle : α constant."""


class ConvergenceError(ModelError):
    """Nombre maximal d'itérations atteint."""


class ConfigError(ModelError):
    """Problème dans un fichier de scénario ; key_path désigne la clé fautive."""

    def __init__(self, message: str, key_path: Optional[str] = None):
        self.key_path = key_path
        if key_path and key_path not in message:
            message = f"{key_path}: {message}"
        super().__init__(message)
