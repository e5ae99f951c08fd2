import sys
import traceback
from utils import get_logger
import mailer
from impl.scenario.cli import main


if __name__ == '__main__':
    try:
        status = main(sys.argv[1:], notify=True)
    except Exception as e:
        error_msg = traceback.format_exc()
        mailer.send_error(error_msg)
        get_logger().error(error_msg)
        raise e
    sys.exit(status)
