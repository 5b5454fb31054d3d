"""English/Spanish label catalog.

Every chart payload leaving the service carries both locales so the
dashboard can retoggle languages without refetching.
"""
from __future__ import annotations

CATALOG: dict[str, dict[str, str]] = {
    # Profile parameters
    "avg_saccade_rate": {"en": "Average saccades (per minute)", "es": "Sacadas medias (por minuto)"},
    "avg_fixation_rate": {"en": "Average fixations (per minute)", "es": "Fijaciones medias (por minuto)"},
    "avg_saccade_time": {"en": "Average saccade time (ms)", "es": "Tiempo medio de sacada (ms)"},
    "avg_fixation_time": {"en": "Average fixation time (ms)", "es": "Tiempo medio de fijación (ms)"},
    # Factors
    "sex": {"en": "Sex", "es": "Sexo"},
    "group": {"en": "Group", "es": "Grupo"},
    "html_level": {"en": "HTML level", "es": "Nivel de HTML"},
    # Factor levels
    "F": {"en": "Female", "es": "Mujer"},
    "M": {"en": "Male", "es": "Hombre"},
    "Unspecified": {"en": "Unspecified", "es": "Sin especificar"},
    "G1": {"en": "Group 1", "es": "Grupo 1"},
    "G2": {"en": "Group 2", "es": "Grupo 2"},
    "G3": {"en": "Group 3", "es": "Grupo 3"},
    # Activities
    "Video": {"en": "Video watching", "es": "Visualización de vídeo"},
    "Reading": {"en": "Reading", "es": "Lectura"},
    "Assignment": {"en": "Assignment", "es": "Tarea"},
    "WholeSession": {"en": "Whole session", "es": "Sesión completa"},
    "Untagged": {"en": "Untagged", "es": "Sin etiquetar"},
    # Prediction labels
    "VideoWatching": {"en": "Video watching", "es": "Visualización de vídeo"},
    # Statistics and metrics
    "anova": {"en": "ANOVA test", "es": "Prueba ANOVA"},
    "f_statistic": {"en": "F statistic", "es": "Estadístico F"},
    "p_value": {"en": "p-value", "es": "Valor p"},
    "significant": {"en": "Significant", "es": "Significativo"},
    "not_significant": {"en": "Not significant", "es": "No significativo"},
    "accuracy": {"en": "Accuracy test", "es": "Precisión del test"},
    "precision": {"en": "Precision", "es": "Precisión"},
    "recall": {"en": "Recall", "es": "Exhaustividad"},
    "f1_score": {"en": "F1-Score", "es": "Puntuación F1"},
    "heatmap": {"en": "Attention heat map", "es": "Mapa de calor de atención"},
    "boxplot": {"en": "Box plot", "es": "Diagrama de cajas"},
    "learner": {"en": "Learner", "es": "Estudiante"},
    "session": {"en": "Session", "es": "Sesión"},
    "activity": {"en": "Activity", "es": "Actividad"},
    "all_activities": {"en": "All activities", "es": "Todas las actividades"},
    "duration": {"en": "Fixation duration (ms)", "es": "Duración de fijación (ms)"},
    "count": {"en": "Fixation count", "es": "Número de fijaciones"},
    "prediction": {"en": "Prediction", "es": "Predicción"},
    "confidence": {"en": "Confidence", "es": "Confianza"},
    "model_rf": {"en": "Random Forest", "es": "Bosque aleatorio"},
    "model_mlp": {"en": "Neural Network", "es": "Red neuronal"},
}


def label_pair(key: str) -> dict[str, str]:
    """Both locale strings for a key; unknown keys echo themselves."""
    return dict(CATALOG.get(key, {"en": key, "es": key}))


def label(key: str, locale: str = "en") -> str:
    return label_pair(key).get(locale, key)
