import logging
import os
import sys

# Определение формата логирования
LOG_FORMAT = '%(asctime)s - %(levelname)s - %(name)s - %(message)s'

# Путь к файлу лога берётся из окружения; без него пишем только в stdout,
# чтобы тесты и короткие прогоны не оставляли файлов в рабочем каталоге
LOG_FILE = os.getenv("SOLITON_LOG_FILE")

# Используем корневой логгер: модули берут logging.getLogger(__name__)
# и наследуют его обработчики
logger = logging.getLogger()

# Общий уровень; lab.py переопределяет его значением SOLITON_LOG_LEVEL
logger.setLevel(logging.INFO)

formatter = logging.Formatter(LOG_FORMAT)

# Обработчик для стандартного вывода (stdout)
stream_handler = logging.StreamHandler(sys.stdout)
stream_handler.setLevel(logging.DEBUG)
stream_handler.setFormatter(formatter)

# Проверяем, чтобы обработчики не были добавлены повторно
# (например, при повторном импорте модуля)
if not logger.handlers:
    logger.addHandler(stream_handler)
    if LOG_FILE:
        # Указываем кодировку для совместимости с русским языком
        file_handler = logging.FileHandler(LOG_FILE, encoding='utf-8')
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)


if __name__ == "__main__":
    logging.info("Это информационное сообщение.")
    logging.warning("Это предупреждение.")
    logging.debug("Это отладочное сообщение (не должно отображаться, т.к. уровень INFO).")
    logging.getLogger("services.propagator").info("Сообщение из модуля.")
