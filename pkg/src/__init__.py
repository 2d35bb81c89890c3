"""
Overconvergence Toolkit
Построение и проверка усечённых универсальных рядов Тейлора

Модульная архитектура:
- geometry: компакты, области и сетки на плоскости
- series: нумерации мультииндексов и полиномиальная алгебра Тейлора
- approximation: полиномиальная аппроксимация по сеткам
- universal: построение рядов с сертификатом и его проверка
- rearrange: перестановки рядов с неплотными частичными суммами
- storage: файлы рядов и отчёты
- config: конфигурация и настройки
- core: исключения, обработка ошибок, приложение и оркестратор
"""

__version__ = "1.0.0"
__author__ = "Overconvergence Toolkit"
